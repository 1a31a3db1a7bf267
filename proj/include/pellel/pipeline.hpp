#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pellel/bridge.hpp"
#include "pellel/calculus.hpp"
#include "pellel/forms.hpp"
#include "pellel/minnorm.hpp"

namespace pellel {

/// Failure inside one stage of a construction; `stage()` names the stage.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineOptions {
  double tol = 1e-9;
  int maxiter = 0;
  double slack = 0.15;
  /// Inputs must satisfy |df| <= closed_tol * |f| * h.
  double closed_tol = 1e-2;
  /// Convexity constant; estimated on the grid when absent.
  std::optional<double> c;
};

struct PoincareResult {
  RealForm u;
  SolveReport report;
  double c = 0.0;
  double closedness = 0.0;  // |df| / |f|
};

/// Minimum-norm u with du = f for a closed (p+1)-form f; report.bound is
/// 1/(c(p+1)).
PoincareResult solve_poincare(const RealForm& f, const Calculus& calc,
                              const PipelineOptions& opts = {});

struct DbarResult {
  ComplexForm w;
  SolveReport report;
  double c = 0.0;
  double c_levi = 0.0;
  double closedness = 0.0;  // |dbar g| / |g|
};

/// Minimum-norm function w with dbar w = g for a dbar-closed (0,1) form g;
/// report.bound is 2/c_levi with c_levi = c/2.
DbarResult solve_dbar(const ComplexForm& g, const Calculus& calc,
                      const PipelineOptions& opts = {});

struct PipelineReport {
  bool real_input = true;
  double c = 0.0;
  double c_levi = 0.0;
  double slack = 0.0;
  double h = 0.0;

  double norm_f2 = 0.0;       // (1,1) norm
  double norm_f2_real = 0.0;  // as a real 2-form
  double norm_v2 = 0.0;
  double norm_w2 = 0.0;
  double norm_u2 = 0.0;

  double bound_poincare = 0.0;  // 1/(2c)
  double bound_dbar = 0.0;      // 2/c_levi
  double bound_main = 0.0;      // 8/c^2
  double ratio_poincare = 0.0;  // |v|^2 / |f|^2_real
  double ratio_dbar = 0.0;      // |w|^2 / |v01|^2
  double ratio_main = 0.0;      // |u|^2 / |f|^2

  double residual_dv = 0.0;     // |dv - f| / |f|
  double residual_dbar = 0.0;   // |dbar w - v01| / |v01|
  double residual_conj = 0.0;   // |partial wbar - v10| / |v10|
  double residual_20 = 0.0;     // |partial v10| / |f|
  double residual_02 = 0.0;     // |dbar v01| / |f|
  double residual = 0.0;        // |i partial dbar u - f| / |f|
  double imag_u = 0.0;          // max |Im u| / max |u| for real input

  bool within_bound = false;
  std::vector<SolveReport> poincare_stages;
  std::vector<SolveReport> dbar_stages;
};

struct PipelineResult {
  ComplexForm u;  // (0,0) form on level 0
  PipelineReport report;
};

/// Solves i partial dbar u = f for a d-closed (1,1) form f. A real f goes
/// through one Poincare solve, the type splitting and one dbar solve; a
/// non-real f is split as f1 + i f2 and the potentials are combined.
PipelineResult solve_poincare_lelong(const ComplexForm& f, const Calculus& calc,
                                     const PipelineOptions& opts = {});

/// i partial dbar u for a function u.
ComplexForm levi_form(const ComplexForm& u, const Calculus& calc);

struct CorollaryResult {
  double c_omega = 0.0;
  double unweighted_norm_u2 = 0.0;
  double unweighted_norm_f2 = 0.0;
  double ratio = 0.0;
  bool within_bound = false;
  PipelineReport pipeline;
};

/// 2 exp(max phi - min phi) over the closure of the domain for phi = |x|^2.
double corollary_constant(const Domain& domain);

/// Runs the pipeline with phi = |x|^2 and compares the unweighted ratio with
/// corollary_constant(domain).
CorollaryResult corollary_check(const Domain& domain, const ComplexForm& f, const GridPtr& grid,
                                const PipelineOptions& opts = {});

}  // namespace pellel
