#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pellel {

/// Invalid run configuration; `field()` names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct DomainSpec {
  std::string kind = "ball";  // ball | ellipsoid
  double radius = 1.0;
  std::vector<double> semi_axes;
  std::vector<double> center;  // empty means the origin
};

struct WeightSpec {
  std::string preset = "norm_squared";  // norm_squared | norm_squared_plus_quartic | zero | quadratic
  std::vector<std::vector<double>> matrix;
};

struct FormSpec {
  std::string preset;  // empty picks the mode default
  std::string file;    // coefficient table written by write_csv
  int degree = 2;      // real degree for poincare input
};

struct Tolerances {
  double solver = 1e-9;
  int maxiter = 0;
  double slack = 0.15;
  double closed = 1e-2;
  std::optional<double> residual;  // acceptance threshold, per-mode default
};

struct RunConfig {
  std::string mode = "pipeline";  // pipeline | poincare | dbar | verify | converge
  int N = 2;
  DomainSpec domain;
  WeightSpec weight;
  double h = 1.0 / 64;
  std::vector<double> h_sequence;
  FormSpec form;
  std::string suite = "all";       // dalpha | boundary | bochner | basic | all
  std::string target = "poincare"; // solve repeated by converge
  int boundary_nodes = 1024;
  Tolerances tol;
  std::string out = "out";
  std::uint64_t seed = 7;
  bool write_forms = false;
};

RunConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
/// Throws ConfigError on the first invalid field.
void validate(const RunConfig& cfg);

struct TableRow {
  std::string mode;
  int N = 0;
  double h = 0.0;
  double c = 0.0;
  double norm_f2 = 0.0;
  double norm_u2 = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  double residual = 0.0;
  std::optional<double> order;
};

struct RunReport {
  nlohmann::json json;  // config, c, per-stage data, checks, pass, wall_time_s
  std::vector<TableRow> table;
  std::vector<std::pair<std::string, std::string>> forms;  // file stem, CSV text
  bool pass = false;
};

/// Executes the configured mode without touching the file system.
RunReport execute(const RunConfig& cfg);

/// execute() plus <out>/report.json, <out>/table.csv and, with write_forms,
/// <out>/forms/*.csv.
RunReport run(const RunConfig& cfg);

void write_table(std::ostream& os, const std::vector<TableRow>& rows);

/// Row k >= 2 gets log(e_{k-2}/e_{k-1}) / log(h_{k-1}/h_k) with
/// e_k = |r_{k+1} - r_k|; for halved steps this is log2(e_h / e_{h/2}).
std::vector<std::optional<double>> observed_order(const std::vector<double>& h,
                                                  const std::vector<double>& r);

}  // namespace pellel
