#include "pellel/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "pellel/calculus.hpp"
#include "pellel/pipeline.hpp"
#include "pellel/polynomial.hpp"
#include "pellel/report_json.hpp"
#include "pellel/verify.hpp"

namespace pellel {

using nlohmann::json;

namespace {

const std::vector<std::string> kModes{"pipeline", "poincare", "dbar", "verify", "converge"};
const std::vector<std::string> kSuites{"dalpha", "boundary", "bochner", "basic", "all"};
const std::vector<std::string> kTargets{"pipeline", "poincare", "dbar"};
const std::vector<std::string> kWeights{"norm_squared", "norm_squared_plus_quartic", "zero",
                                        "quadratic"};
const std::vector<std::string> kPipelineForms{"i_dz_dzbar", "complex_i_dz_dzbar", "levi_quartic",
                                              "zero"};
const std::vector<std::string> kPoincareForms{"dx1_dx2", "d_x1x2", "zero"};
const std::vector<std::string> kDbarForms{"dzbar", "two_zbar_dzbar", "zero"};

bool one_of(const std::string& s, const std::vector<std::string>& list) {
  return std::find(list.begin(), list.end(), s) != list.end();
}

std::string joined(const std::vector<std::string>& list) {
  std::string s;
  for (const auto& v : list) s += (s.empty() ? "" : ", ") + v;
  return s;
}

template <class T>
void read_field(const json& j, const char* key, T& out, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + key, std::string("wrong type (") + e.what() + ")");
  }
}

const std::vector<std::string>& form_presets(const std::string& mode) {
  if (mode == "pipeline") return kPipelineForms;
  if (mode == "dbar") return kDbarForms;
  return kPoincareForms;
}

std::string default_form(const std::string& mode) {
  if (mode == "pipeline") return "i_dz_dzbar";
  if (mode == "dbar") return "dzbar";
  return "dx1_dx2";
}

/// Mode whose input form and solver a single solve uses.
std::string solve_mode(const RunConfig& cfg) {
  return cfg.mode == "converge" ? cfg.target : cfg.mode;
}

Domain make_domain(const RunConfig& cfg) {
  const DomainSpec& d = cfg.domain;
  Eigen::VectorXd center = Eigen::VectorXd::Zero(cfg.N);
  if (!d.center.empty()) center = Eigen::Map<const Eigen::VectorXd>(d.center.data(), cfg.N);
  Domain dom = d.kind == "ball"
                   ? Domain::ball(cfg.N, d.radius, center)
                   : Domain::ellipsoid(Eigen::Map<const Eigen::VectorXd>(d.semi_axes.data(),
                                                                         cfg.N),
                                       center);
  dom.validate();
  return dom;
}

Weight make_weight(const RunConfig& cfg) {
  const std::string& p = cfg.weight.preset;
  if (p == "norm_squared") return Weight::norm_squared(cfg.N);
  if (p == "norm_squared_plus_quartic") return Weight::norm_squared_plus_quartic(cfg.N);
  if (p == "zero") return Weight::zero(cfg.N);
  Eigen::MatrixXd A(cfg.N, cfg.N);
  for (int i = 0; i < cfg.N; ++i) {
    for (int j = 0; j < cfg.N; ++j) A(i, j) = cfg.weight.matrix[i][j];
  }
  return Weight::quadratic(A);
}

PipelineOptions make_options(const RunConfig& cfg) {
  PipelineOptions o;
  o.tol = cfg.tol.solver;
  o.maxiter = cfg.tol.maxiter;
  o.slack = cfg.tol.slack;
  o.closed_tol = cfg.tol.closed;
  return o;
}

double residual_threshold(const RunConfig& cfg, const std::string& mode) {
  if (cfg.tol.residual) return *cfg.tol.residual;
  return mode == "pipeline" ? 1e-5 : 1e-6;
}

/// Pass/fail entries; each is re-derivable from value and threshold.
class Checks {
 public:
  void le(const std::string& name, double value, double threshold) {
    add(name, value, "<=", threshold, value <= threshold);
  }
  void ge(const std::string& name, double value, double threshold) {
    add(name, value, ">=", threshold, value >= threshold);
  }
  bool pass() const { return pass_; }
  const json& entries() const { return entries_; }

 private:
  void add(const std::string& name, double value, const char* rel, double threshold, bool ok) {
    entries_.push_back(
        {{"name", name}, {"value", value}, {"relation", rel}, {"threshold", threshold}, {"pass", ok}});
    pass_ = pass_ && ok;
  }
  json entries_ = json::array();
  bool pass_ = true;
};

std::string csv_text(const auto& form) {
  std::ostringstream os;
  write_csv(os, form);
  return os.str();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("form.file", "cannot open " + path);
  return is;
}

ComplexForm pipeline_input(const RunConfig& cfg, const Grid& grid) {
  const int n = cfg.N / 2;
  const Bidegree b{1, 1};
  if (!cfg.form.file.empty()) {
    auto is = open_input(cfg.form.file);
    return read_complex_csv(is, grid, b);
  }
  const std::string p = cfg.form.preset.empty() ? default_form("pipeline") : cfg.form.preset;
  using C = std::complex<double>;
  const C i(0.0, 1.0);
  return ComplexForm::sample(grid, b, [&](const Eigen::VectorXd& x) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n * n);
    if (p == "i_dz_dzbar") v[0] = i;
    if (p == "complex_i_dz_dzbar") v[0] = (1.0 + i) * i;
    if (p == "levi_quartic") v[0] = i * 4.0 * (x[0] * x[0] + x[1] * x[1]);
    return v;
  });
}

RealForm poincare_input(const RunConfig& cfg, const Grid& grid) {
  if (!cfg.form.file.empty()) {
    auto is = open_input(cfg.form.file);
    return read_real_csv(is, grid, cfg.form.degree);
  }
  const std::string p = cfg.form.preset.empty() ? default_form("poincare") : cfg.form.preset;
  if (p == "zero") return RealForm::zero(grid, cfg.form.degree);
  if (p == "dx1_dx2") {
    // dx1 ^ dx2 is the first degree-2 component.
    const Eigen::Index comps = binomial(cfg.N, 2);
    return RealForm::sample(grid, 2, [&](const Eigen::VectorXd&) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(comps);
      v[0] = 1.0;
      return v;
    });
  }
  return RealForm::sample(grid, 1, [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(cfg.N);
    v[0] = x[1];
    v[1] = x[0];
    return v;
  });
}

ComplexForm dbar_input(const RunConfig& cfg, const Grid& grid) {
  const int n = cfg.N / 2;
  const Bidegree b{0, 1};
  if (!cfg.form.file.empty()) {
    auto is = open_input(cfg.form.file);
    return read_complex_csv(is, grid, b);
  }
  const std::string p = cfg.form.preset.empty() ? default_form("dbar") : cfg.form.preset;
  return ComplexForm::sample(grid, b, [&](const Eigen::VectorXd& x) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    if (p == "dzbar") v[0] = 1.0;
    if (p == "two_zbar_dzbar") v[0] = 2.0 * std::complex<double>(x[0], -x[1]);
    return v;
  });
}

struct Solve {
  json data;
  TableRow row;
  std::vector<std::pair<std::string, std::string>> forms;
};

Solve run_pipeline(const RunConfig& cfg, const Calculus& calc, Checks& checks,
                   const std::string& tag) {
  const ComplexForm f = pipeline_input(cfg, calc.grid());
  const PipelineResult r = solve_poincare_lelong(f, calc, make_options(cfg));
  const PipelineReport& p = r.report;
  checks.le(tag + "ratio", p.ratio_main, p.bound_main * (1 + cfg.tol.slack));
  checks.le(tag + "residual", p.residual, residual_threshold(cfg, "pipeline"));
  if (p.real_input) checks.le(tag + "imag_u", p.imag_u, 1e-12);
  Solve s;
  s.data = p;
  s.row = {"pipeline", cfg.N, calc.grid().spacing(), p.c, p.norm_f2, p.norm_u2,
           p.ratio_main, p.bound_main, p.residual, std::nullopt};
  if (cfg.write_forms) s.forms = {{"f", csv_text(f)}, {"u", csv_text(r.u)}};
  return s;
}

Solve run_poincare(const RunConfig& cfg, const Calculus& calc, Checks& checks,
                   const std::string& tag) {
  const RealForm f = poincare_input(cfg, calc.grid());
  const PoincareResult r = solve_poincare(f, calc, make_options(cfg));
  const SolveReport& p = r.report;
  checks.le(tag + "ratio", p.ratio, p.bound * (1 + cfg.tol.slack));
  checks.le(tag + "residual", p.relative_residual, residual_threshold(cfg, "poincare"));
  Solve s;
  s.data = {{"c", r.c}, {"closedness", r.closedness}, {"solve", p}};
  s.row = {"poincare", cfg.N, calc.grid().spacing(), r.c, p.rhs_norm2, p.solution_norm2,
           p.ratio, p.bound, p.relative_residual, std::nullopt};
  if (cfg.write_forms) s.forms = {{"f", csv_text(f)}, {"u", csv_text(r.u)}};
  return s;
}

Solve run_dbar(const RunConfig& cfg, const Calculus& calc, Checks& checks,
               const std::string& tag) {
  const ComplexForm g = dbar_input(cfg, calc.grid());
  const DbarResult r = solve_dbar(g, calc, make_options(cfg));
  const SolveReport& p = r.report;
  checks.le(tag + "ratio", p.ratio, p.bound * (1 + cfg.tol.slack));
  checks.le(tag + "residual", p.relative_residual, residual_threshold(cfg, "dbar"));
  Solve s;
  s.data = {{"c", r.c}, {"c_levi", r.c_levi}, {"closedness", r.closedness}, {"solve", p}};
  s.row = {"dbar", cfg.N, calc.grid().spacing(), r.c, p.rhs_norm2, p.solution_norm2,
           p.ratio, p.bound, p.relative_residual, std::nullopt};
  if (cfg.write_forms) s.forms = {{"g", csv_text(g)}, {"w", csv_text(r.w)}};
  return s;
}

Solve run_single(const RunConfig& cfg, const std::string& mode, double h, Checks& checks,
                 const std::string& tag) {
  const Domain domain = make_domain(cfg);
  const Calculus calc(build_grid(domain, h), make_weight(cfg));
  if (mode == "pipeline") return run_pipeline(cfg, calc, checks, tag);
  if (mode == "dbar") return run_dbar(cfg, calc, checks, tag);
  return run_poincare(cfg, calc, checks, tag);
}

/// Tangential test forms g T on a planar domain.
std::vector<std::pair<std::string, PolyForm>> tangential_forms(const Domain& domain,
                                                               std::mt19937_64& rng) {
  const Polynomial one = Polynomial::constant(2, 1.0);
  const Polynomial x1 = Polynomial::coordinate(2, 1);
  const Polynomial x2 = Polynomial::coordinate(2, 2);
  std::vector<std::pair<std::string, PolyForm>> out;
  out.emplace_back("1", tangential_1form(domain, one));
  out.emplace_back("x1", tangential_1form(domain, x1));
  out.emplace_back("x1*x2", tangential_1form(domain, x1 * x2));
  out.emplace_back("1+x2^2", tangential_1form(domain, one + x2 * x2));
  out.emplace_back("random", tangential_1form(domain, random_polynomial(2, 3, rng)));
  return out;
}

void require_planar(const RunConfig& cfg, const std::string& suite) {
  if (cfg.N != 2) throw ConfigError("suite", suite + " needs N = 2");
}

json verify_dalpha(const RunConfig& cfg, Checks& checks, std::vector<TableRow>& rows) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int count = 0;
  for (int k = 0; k < 100; ++k) {
    const int N = k % 2 == 0 ? 2 : 4;
    const int degree = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(N));
    const PolyForm a = random_poly_form(N, degree, 3, rng);
    Eigen::MatrixXd pts(16, N);
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
      for (int c = 0; c < N; ++c) pts(r, c) = u(rng);
    }
    worst = std::max(worst, check_dalpha_identity(a, pts).relative());
    ++count;
  }
  checks.le("dalpha.deviation", worst, 1e-12);
  rows.push_back({"verify:dalpha", 4, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, worst, std::nullopt});
  return {{"forms", count}, {"points_per_form", 16}, {"max_relative_deviation", worst}};
}

json verify_boundary(const RunConfig& cfg, Checks& checks, std::vector<TableRow>& rows) {
  require_planar(cfg, "boundary");
  const Domain domain = make_domain(cfg);
  const BoundaryQuadrature quad = boundary_quadrature(domain, cfg.boundary_nodes);
  std::mt19937_64 rng(cfg.seed);
  json out = json::array();
  double worst = 0.0;
  for (const auto& [name, a] : tangential_forms(domain, rng)) {
    const IdentityCheck r = check_boundary_identity(a, domain, quad);
    worst = std::max(worst, r.relative());
    out.push_back({{"g", name}, {"check", r}});
  }
  checks.le("boundary.deviation", worst, 1e-8);
  rows.push_back({"verify:boundary", 2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, worst, std::nullopt});
  return out;
}

json verify_bochner(const RunConfig& cfg, Checks& checks, std::vector<TableRow>& rows) {
  require_planar(cfg, "bochner");
  const Domain domain = make_domain(cfg);
  const Weight weight = make_weight(cfg);
  const BoundaryQuadrature quad = boundary_quadrature(domain, cfg.boundary_nodes);
  std::mt19937_64 rng(cfg.seed);
  json out = json::array();
  double worst = 0.0, worst_gain = std::numeric_limits<double>::infinity();
  for (const auto& [name, a] : tangential_forms(domain, rng)) {
    const BochnerTerms coarse = check_bochner_identity(a, weight, domain, cfg.h, quad);
    const BochnerTerms fine = check_bochner_identity(a, weight, domain, cfg.h / 2, quad);
    const double gain = fine.deviation > 0 ? coarse.deviation / fine.deviation
                                           : std::numeric_limits<double>::infinity();
    worst = std::max(worst, coarse.deviation);
    worst_gain = std::min(worst_gain, gain);
    out.push_back({{"g", name}, {"h", coarse}, {"h_half", fine}, {"improvement", gain}});
    rows.push_back({"verify:bochner", 2, cfg.h, 0.0, coarse.norm_alpha2, coarse.lhs,
                    coarse.lhs / coarse.rhs, 1.0, coarse.deviation, std::nullopt});
  }
  checks.le("bochner.deviation", worst, 0.02);
  checks.ge("bochner.improvement", worst_gain, 1.5);
  return out;
}

json verify_basic(const RunConfig& cfg, Checks& checks, std::vector<TableRow>& rows) {
  require_planar(cfg, "basic");
  const Domain domain = make_domain(cfg);
  const Weight weight = make_weight(cfg);
  const BoundaryQuadrature quad = boundary_quadrature(domain, cfg.boundary_nodes);
  const double c = estimate_c(weight, Grid::build(domain, cfg.h));
  std::mt19937_64 rng(cfg.seed);
  json out = json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& [name, a] : tangential_forms(domain, rng)) {
    const BasicEstimate e = check_basic_estimate(a, weight, domain, cfg.h, quad, c);
    worst = std::min(worst, e.relative_margin);
    out.push_back({{"g", name}, {"estimate", e}});
    rows.push_back({"verify:basic", 2, cfg.h, c, e.norm_alpha2, e.lhs,
                    e.lhs / e.norm_alpha2, e.c * a.degree(), e.relative_margin, std::nullopt});
  }
  checks.ge("basic.relative_margin", worst, -0.02);
  return out;
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  RunConfig cfg;
  read_field(j, "mode", cfg.mode, "");
  if (j.contains("n")) {
    int n = 0;
    read_field(j, "n", n, "");
    cfg.N = 2 * n;
    if (j.contains("N")) {
      read_field(j, "N", cfg.N, "");
      if (cfg.N != 2 * n) throw ConfigError("N", "must equal 2n (n = " + std::to_string(n) + ")");
    }
  }
  read_field(j, "N", cfg.N, "");
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    if (!d.is_object()) throw ConfigError("domain", "must be an object");
    read_field(d, "kind", cfg.domain.kind, "domain.");
    read_field(d, "radius", cfg.domain.radius, "domain.");
    read_field(d, "semi_axes", cfg.domain.semi_axes, "domain.");
    read_field(d, "center", cfg.domain.center, "domain.");
    if (!j.contains("N") && !j.contains("n") && !cfg.domain.semi_axes.empty()) {
      cfg.N = static_cast<int>(cfg.domain.semi_axes.size());
    }
  }
  if (j.contains("weight")) {
    const json& w = j.at("weight");
    if (!w.is_object()) throw ConfigError("weight", "must be an object");
    read_field(w, "preset", cfg.weight.preset, "weight.");
    read_field(w, "matrix", cfg.weight.matrix, "weight.");
    if (w.contains("matrix") && !w.contains("preset")) cfg.weight.preset = "quadratic";
  }
  read_field(j, "h", cfg.h, "");
  read_field(j, "h_sequence", cfg.h_sequence, "");
  if (j.contains("form")) {
    const json& f = j.at("form");
    if (!f.is_object()) throw ConfigError("form", "must be an object");
    read_field(f, "preset", cfg.form.preset, "form.");
    read_field(f, "file", cfg.form.file, "form.");
    read_field(f, "degree", cfg.form.degree, "form.");
  }
  read_field(j, "suite", cfg.suite, "");
  read_field(j, "target", cfg.target, "");
  read_field(j, "boundary_nodes", cfg.boundary_nodes, "");
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances", "must be an object");
    read_field(t, "solver", cfg.tol.solver, "tolerances.");
    read_field(t, "maxiter", cfg.tol.maxiter, "tolerances.");
    read_field(t, "slack", cfg.tol.slack, "tolerances.");
    read_field(t, "closed", cfg.tol.closed, "tolerances.");
    if (t.contains("residual")) {
      double r = 0.0;
      read_field(t, "residual", r, "tolerances.");
      cfg.tol.residual = r;
    }
  }
  read_field(j, "out", cfg.out, "");
  read_field(j, "seed", cfg.seed, "");
  read_field(j, "write_forms", cfg.write_forms, "");
  return cfg;
}

json config_to_json(const RunConfig& cfg) {
  json j = {{"mode", cfg.mode},
            {"N", cfg.N},
            {"domain",
             {{"kind", cfg.domain.kind},
              {"radius", cfg.domain.radius},
              {"semi_axes", cfg.domain.semi_axes},
              {"center", cfg.domain.center}}},
            {"weight", {{"preset", cfg.weight.preset}, {"matrix", cfg.weight.matrix}}},
            {"h", cfg.h},
            {"h_sequence", cfg.h_sequence},
            {"form",
             {{"preset", cfg.form.preset}, {"file", cfg.form.file}, {"degree", cfg.form.degree}}},
            {"suite", cfg.suite},
            {"target", cfg.target},
            {"boundary_nodes", cfg.boundary_nodes},
            {"tolerances",
             {{"solver", cfg.tol.solver},
              {"maxiter", cfg.tol.maxiter},
              {"slack", cfg.tol.slack},
              {"closed", cfg.tol.closed}}},
            {"out", cfg.out},
            {"seed", cfg.seed},
            {"write_forms", cfg.write_forms}};
  if (cfg.tol.residual) j["tolerances"]["residual"] = *cfg.tol.residual;
  return j;
}

void validate(const RunConfig& cfg) {
  if (!one_of(cfg.mode, kModes)) {
    throw ConfigError("mode", "unknown mode '" + cfg.mode + "' (expected " + joined(kModes) + ")");
  }
  if (cfg.N < 1) throw ConfigError("N", "must be at least 1");
  if (!(cfg.h > 0) || !std::isfinite(cfg.h)) {
    throw ConfigError("h", "must be positive (got " + std::to_string(cfg.h) + ")");
  }
  for (std::size_t k = 0; k < cfg.h_sequence.size(); ++k) {
    if (!(cfg.h_sequence[k] > 0)) {
      throw ConfigError("h_sequence[" + std::to_string(k) + "]", "must be positive");
    }
  }
  if (cfg.mode == "converge") {
    if (cfg.h_sequence.size() < 2) throw ConfigError("h_sequence", "converge needs at least two steps");
    if (!one_of(cfg.target, kTargets)) {
      throw ConfigError("target", "unknown target '" + cfg.target + "' (expected " +
                                      joined(kTargets) + ")");
    }
  }
  const std::string mode = solve_mode(cfg);
  if ((mode == "pipeline" || mode == "dbar") && cfg.N % 2 != 0) {
    throw ConfigError("N", "complex modes need N = 2n (got " + std::to_string(cfg.N) + ")");
  }
  if (cfg.mode == "verify" && !one_of(cfg.suite, kSuites)) {
    throw ConfigError("suite", "unknown suite '" + cfg.suite + "' (expected " + joined(kSuites) + ")");
  }

  const DomainSpec& d = cfg.domain;
  if (d.kind == "ball") {
    if (!(d.radius > 0)) throw ConfigError("domain.radius", "must be positive");
  } else if (d.kind == "ellipsoid") {
    if (static_cast<int>(d.semi_axes.size()) != cfg.N) {
      throw ConfigError("domain.semi_axes", "needs N = " + std::to_string(cfg.N) + " entries");
    }
    for (double a : d.semi_axes) {
      if (!(a > 0)) throw ConfigError("domain.semi_axes", "entries must be positive");
    }
  } else {
    throw ConfigError("domain.kind", "unknown kind '" + d.kind + "' (expected ball, ellipsoid)");
  }
  if (!d.center.empty() && static_cast<int>(d.center.size()) != cfg.N) {
    throw ConfigError("domain.center", "needs N = " + std::to_string(cfg.N) + " entries");
  }

  if (!one_of(cfg.weight.preset, kWeights)) {
    throw ConfigError("weight.preset", "unknown preset '" + cfg.weight.preset + "' (expected " +
                                           joined(kWeights) + ")");
  }
  if (cfg.weight.preset == "quadratic") {
    const auto& A = cfg.weight.matrix;
    bool ok = static_cast<int>(A.size()) == cfg.N;
    for (const auto& row : A) ok = ok && static_cast<int>(row.size()) == cfg.N;
    if (!ok) throw ConfigError("weight.matrix", "must be " + std::to_string(cfg.N) + " x " +
                                                    std::to_string(cfg.N));
  }

  if (cfg.mode != "verify") {
    if (cfg.form.file.empty() && !cfg.form.preset.empty() &&
        !one_of(cfg.form.preset, form_presets(mode))) {
      throw ConfigError("form.preset", "unknown preset '" + cfg.form.preset + "' for " + mode +
                                           " (expected " + joined(form_presets(mode)) + ")");
    }
    if (mode == "poincare") {
      const std::string p = cfg.form.preset.empty() ? default_form(mode) : cfg.form.preset;
      if (cfg.form.file.empty() && p == "dx1_dx2" && cfg.N < 2) {
        throw ConfigError("form.preset", "dx1_dx2 needs N >= 2");
      }
      if (cfg.form.file.empty() && p == "d_x1x2" && cfg.N < 2) {
        throw ConfigError("form.preset", "d_x1x2 needs N >= 2");
      }
      const int degree = (cfg.form.file.empty() && p != "zero") ? (p == "dx1_dx2" ? 2 : 1)
                                                                : cfg.form.degree;
      if (degree < 1 || degree > cfg.N) {
        throw ConfigError("form.degree", "must lie in 1..N");
      }
    }
  }
  if (cfg.boundary_nodes < 8) throw ConfigError("boundary_nodes", "must be at least 8");
  if (!(cfg.tol.solver > 0)) throw ConfigError("tolerances.solver", "must be positive");
  if (cfg.tol.maxiter < 0) throw ConfigError("tolerances.maxiter", "must be non-negative");
  if (!(cfg.tol.slack >= 0)) throw ConfigError("tolerances.slack", "must be non-negative");
  if (!(cfg.tol.closed > 0)) throw ConfigError("tolerances.closed", "must be positive");
  if (cfg.tol.residual && !(*cfg.tol.residual > 0)) {
    throw ConfigError("tolerances.residual", "must be positive");
  }
  if (cfg.out.empty()) throw ConfigError("out", "must not be empty");
}

std::vector<std::optional<double>> observed_order(const std::vector<double>& h,
                                                  const std::vector<double>& r) {
  std::vector<std::optional<double>> out(r.size());
  for (std::size_t k = 2; k < r.size(); ++k) {
    const double e0 = std::abs(r[k - 1] - r[k - 2]);
    const double e1 = std::abs(r[k] - r[k - 1]);
    if (e0 > 0 && e1 > 0) out[k] = std::log(e0 / e1) / std::log(h[k - 1] / h[k]);
  }
  return out;
}

RunReport execute(const RunConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  Checks checks;
  json results;
  double c = 0.0;

  if (cfg.mode == "verify") {
    const bool all = cfg.suite == "all";
    if (all || cfg.suite == "dalpha") results["dalpha"] = verify_dalpha(cfg, checks, rep.table);
    if (all || cfg.suite == "boundary") {
      results["boundary"] = verify_boundary(cfg, checks, rep.table);
    }
    if (all || cfg.suite == "bochner") results["bochner"] = verify_bochner(cfg, checks, rep.table);
    if (all || cfg.suite == "basic") results["basic"] = verify_basic(cfg, checks, rep.table);
    c = estimate_c(make_weight(cfg), Grid::build(make_domain(cfg), cfg.h));
  } else if (cfg.mode == "converge") {
    results = json::array();
    std::vector<double> ratios;
    for (double h : cfg.h_sequence) {
      std::ostringstream tag;
      tag << "h=" << h << ".";
      Solve s = run_single(cfg, cfg.target, h, checks, tag.str());
      s.row.mode = "converge:" + cfg.target;
      ratios.push_back(s.row.ratio);
      rep.table.push_back(s.row);
      results.push_back({{"h", h}, {"result", s.data}});
    }
    const auto order = observed_order(cfg.h_sequence, ratios);
    for (std::size_t k = 0; k < order.size(); ++k) rep.table[k].order = order[k];
    c = rep.table.back().c;
  } else {
    Solve s = run_single(cfg, cfg.mode, cfg.h, checks, "");
    rep.table.push_back(s.row);
    rep.forms = std::move(s.forms);
    results = s.data;
    c = s.row.c;
  }

  rep.pass = checks.pass();
  json order = json::array();
  for (const auto& r : rep.table) order.push_back(r.order ? json(*r.order) : json(nullptr));
  rep.json = {{"config", config_to_json(cfg)},
              {"c", c},
              {"results", results},
              {"checks", checks.entries()},
              {"pass", rep.pass}};
  if (cfg.mode == "converge") rep.json["order"] = order;
  rep.json["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

void write_table(std::ostream& os, const std::vector<TableRow>& rows) {
  os << "mode,N,h,c,norm_f2,norm_u2,ratio,bound,residual,order\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.mode << ',' << r.N << ',' << r.h << ',' << r.c << ',' << r.norm_f2 << ','
       << r.norm_u2 << ',' << r.ratio << ',' << r.bound << ',' << r.residual << ',';
    if (r.order) os << *r.order;
    os << '\n';
  }
}

RunReport run(const RunConfig& cfg) {
  RunReport rep = execute(cfg);
  namespace fs = std::filesystem;
  const fs::path out(cfg.out);
  fs::create_directories(out);
  std::ofstream(out / "report.json") << rep.json.dump(2) << '\n';
  std::ofstream table(out / "table.csv");
  write_table(table, rep.table);
  if (cfg.write_forms && !rep.forms.empty()) {
    fs::create_directories(out / "forms");
    for (const auto& [stem, text] : rep.forms) std::ofstream(out / "forms" / (stem + ".csv")) << text;
  }
  return rep;
}

}  // namespace pellel
