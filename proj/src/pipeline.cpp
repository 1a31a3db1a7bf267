#include "pellel/pipeline.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pellel {

namespace {

const std::complex<double> I(0.0, 1.0);

double rel(double num, double den) { return den > 0 ? num / den : num; }

double norm2(const RealForm& f, const Calculus& calc) {
  if (f.coeffs.size() == 0) return 0.0;
  return weighted_inner(f, f, calc.weights(f.degree));
}

double norm2(const ComplexForm& f, const Calculus& calc) {
  if (f.coeffs.size() == 0) return 0.0;
  return norm11(f).dot(calc.weights(f.level()));
}

double resolve_c(const Calculus& calc, const PipelineOptions& opts) {
  if (opts.c) {
    if (!(*opts.c > 0)) throw ConvexityError("convexity constant must be positive");
    return *opts.c;
  }
  return estimate_c(calc.weight(), calc.grid());
}

SolveOptions solver_options(const PipelineOptions& opts) {
  SolveOptions s;
  s.tol = opts.tol;
  s.maxiter = opts.maxiter;
  return s;
}

template <typename Scalar>
MinNormResult<Scalar> run_solver(const std::string& stage, const LinearMap<Scalar>& A,
                                 const typename LinearMap<Scalar>::Vector& f,
                                 const PipelineOptions& opts) {
  MinNormResult<Scalar> res;
  try {
    res = solve_min_norm(A, f, solver_options(opts));
  } catch (const NotInRangeError& e) {
    throw StageError(stage, e.what());
  }
  if (!res.report.converged) {
    throw StageError(stage, "solver did not converge (" + res.report.status + ", relative residual " +
                                std::to_string(res.report.relative_residual) + " after " +
                                std::to_string(res.report.iterations) + " iterations)");
  }
  return res;
}

struct RealPass {
  ComplexForm u;
  RealForm g;
  RealForm v;
  ComplexForm v10, v01;
  ComplexForm w;
  SolveReport poincare, dbar;
  double c = 0.0, c_levi = 0.0;
  double residual_dv2 = 0.0, residual_dbar2 = 0.0, residual_conj2 = 0.0;
  double residual_20_2 = 0.0, residual_02_2 = 0.0;
};

RealPass run_real(const ComplexForm& f, const Calculus& calc, const PipelineOptions& opts) {
  RealPass r;
  try {
    r.g = real11_to_real2(f, true);
  } catch (const ValidationError& e) {
    throw StageError("convert", e.what());
  }
  PoincareResult P = solve_poincare(r.g, calc, opts);
  r.v = std::move(P.u);
  r.poincare = P.report;
  r.c = P.c;
  RealForm dv = calc.d(r.v);
  dv.coeffs -= r.g.coeffs;
  r.residual_dv2 = norm2(dv, calc);

  std::tie(r.v10, r.v01) = split_1form(r.v);
  if (calc.dim() >= 4) {
    r.residual_20_2 = norm2(calc.partial(r.v10), calc);
    r.residual_02_2 = norm2(calc.dbar(r.v01), calc);
  }

  PipelineOptions dopts = opts;
  dopts.c = r.c;
  DbarResult D = solve_dbar(r.v01, calc, dopts);
  r.w = std::move(D.w);
  r.dbar = D.report;
  r.c_levi = D.c_levi;
  ComplexForm res = calc.dbar(r.w);
  res.coeffs -= r.v01.coeffs;
  r.residual_dbar2 = norm2(res, calc);
  ComplexForm wbar = r.w;
  wbar.coeffs = wbar.coeffs.conjugate();
  ComplexForm conj_res = calc.partial(wbar);
  conj_res.coeffs -= r.v10.coeffs;
  r.residual_conj2 = norm2(conj_res, calc);

  // u = -i (w - conj w) = 2 Im w
  r.u = r.w;
  r.u.coeffs = (2.0 * r.w.coeffs.imag()).cast<std::complex<double>>();
  return r;
}

}  // namespace

PoincareResult solve_poincare(const RealForm& f, const Calculus& calc, const PipelineOptions& opts) {
  const int N = calc.dim();
  if (f.dim != N || f.degree < 1 || f.degree > N || f.nodes() != calc.grid().size(f.degree)) {
    throw StageError("poincare", "input must be a form of degree 1..N on its grid level");
  }
  const int p = f.degree - 1;
  PoincareResult out;
  out.c = resolve_c(calc, opts);
  const double fn2 = norm2(f, calc);
  if (f.degree < N) {
    out.closedness = rel(std::sqrt(norm2(calc.d(f), calc)), std::sqrt(fn2));
    if (out.closedness > opts.closed_tol * calc.grid().spacing()) {
      throw StageError("poincare", "input form is not closed (|df|/|f| = " +
                                       std::to_string(out.closedness) + ")");
    }
  }
  const LinearMap<double> A = calc.d_map(p);
  auto res = run_solver("poincare", A, Eigen::VectorXd(f.flat()), opts);
  out.u = RealForm::from_flat(N, p, calc.grid().size(p), res.u);
  out.report = std::move(res.report);
  out.report.bound = 1.0 / (out.c * (p + 1));
  return out;
}

DbarResult solve_dbar(const ComplexForm& g, const Calculus& calc, const PipelineOptions& opts) {
  if (!(g.bidegree == Bidegree{0, 1}) || g.nodes() != calc.grid().size(1)) {
    throw StageError("dbar", "input must be a (0,1) form on grid level 1");
  }
  DbarResult out;
  out.c = resolve_c(calc, opts);
  out.c_levi = 0.5 * out.c;
  const double gn2 = norm2(g, calc);
  if (g.n >= 2) {
    out.closedness = rel(std::sqrt(norm2(calc.dbar(g), calc)), std::sqrt(gn2));
    if (out.closedness > opts.closed_tol * calc.grid().spacing()) {
      throw StageError("dbar", "input form is not dbar-closed (|dbar g|/|g| = " +
                                   std::to_string(out.closedness) + ")");
    }
  }
  const LinearMap<std::complex<double>> A = calc.dbar_map();
  auto res = run_solver("dbar", A, Eigen::VectorXcd(g.flat()), opts);
  out.w = ComplexForm::from_flat(g.n, {0, 0}, calc.grid().size(0), res.u);
  out.report = std::move(res.report);
  out.report.bound = 2.0 / out.c_levi;
  return out;
}

ComplexForm levi_form(const ComplexForm& u, const Calculus& calc) {
  ComplexForm f = calc.partial(calc.dbar(u));
  f.coeffs *= I;
  return f;
}

PipelineResult solve_poincare_lelong(const ComplexForm& f, const Calculus& calc,
                                     const PipelineOptions& opts) {
  if (!(f.bidegree == Bidegree{1, 1}) || f.nodes() != calc.grid().size(2)) {
    throw StageError("input", "f must be a (1,1) form on grid level 2");
  }
  PipelineResult out;
  PipelineReport& rep = out.report;
  rep.slack = opts.slack;
  rep.h = calc.grid().spacing();
  rep.norm_f2 = norm2(f, calc);
  const double scale = f.coeffs.size() > 0 ? f.coeffs.cwiseAbs().maxCoeff() : 0.0;
  rep.real_input = realness_defect(f) <= 1e-10 * scale;

  std::vector<RealPass> passes;
  if (rep.real_input) {
    passes.push_back(run_real(f, calc, opts));
    out.u = passes[0].u;
  } else {
    auto [f1, f2] = split_nonreal(f);
    passes.push_back(run_real(f1, calc, opts));
    PipelineOptions o2 = opts;
    o2.c = passes[0].c;
    passes.push_back(run_real(f2, calc, o2));
    out.u = passes[0].u;
    out.u.coeffs += I * passes[1].u.coeffs;
  }

  double g2 = 0, v2 = 0, v01_2 = 0, v10_2 = 0, w2 = 0;
  double rdv = 0, rdbar = 0, rconj = 0, r20 = 0, r02 = 0;
  for (const RealPass& p : passes) {
    g2 += norm2(p.g, calc);
    v2 += norm2(p.v, calc);
    v01_2 += norm2(p.v01, calc);
    v10_2 += norm2(p.v10, calc);
    w2 += norm2(p.w, calc);
    rdv += p.residual_dv2;
    rdbar += p.residual_dbar2;
    rconj += p.residual_conj2;
    r20 += p.residual_20_2;
    r02 += p.residual_02_2;
    rep.poincare_stages.push_back(p.poincare);
    rep.dbar_stages.push_back(p.dbar);
  }
  rep.c = passes[0].c;
  rep.c_levi = passes[0].c_levi;
  rep.norm_f2_real = g2;
  rep.norm_v2 = v2;
  rep.norm_w2 = w2;
  rep.norm_u2 = norm2(out.u, calc);

  rep.bound_poincare = 1.0 / (2.0 * rep.c);
  rep.bound_dbar = 2.0 / rep.c_levi;
  rep.bound_main = 8.0 / (rep.c * rep.c);
  rep.ratio_poincare = rel(v2, g2);
  rep.ratio_dbar = rel(w2, v01_2);
  rep.ratio_main = rel(rep.norm_u2, rep.norm_f2);

  const double fn = std::sqrt(rep.norm_f2);
  rep.residual_dv = rel(std::sqrt(rdv), std::sqrt(g2));
  rep.residual_dbar = rel(std::sqrt(rdbar), std::sqrt(v01_2));
  rep.residual_conj = rel(std::sqrt(rconj), std::sqrt(v10_2));
  rep.residual_20 = rel(std::sqrt(r20), fn);
  rep.residual_02 = rel(std::sqrt(r02), fn);
  ComplexForm lf = levi_form(out.u, calc);
  lf.coeffs -= f.coeffs;
  rep.residual = rel(std::sqrt(norm2(lf, calc)), fn);
  if (rep.real_input && out.u.coeffs.size() > 0) {
    const double umax = out.u.coeffs.cwiseAbs().maxCoeff();
    rep.imag_u = rel(out.u.coeffs.imag().cwiseAbs().maxCoeff(), umax);
  }
  rep.within_bound = rep.ratio_main <= rep.bound_main * (1.0 + opts.slack);
  return out;
}

double corollary_constant(const Domain& domain) {
  const Eigen::VectorXd& a = domain.semi_axes();
  const Eigen::VectorXd& c = domain.center();
  double max_phi = 0.0, min_phi = 0.0;
  if (c.isZero(0.0)) {
    max_phi = a.cwiseAbs2().maxCoeff();
  } else {
    // Off-centre domains: extremes of |x|^2 sampled on the boundary.
    const int N = domain.dim();
    const int samples = 20000;
    max_phi = 0.0;
    min_phi = std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd dir(N);
      for (int j = 0; j < N; ++j) {
        dir[j] = std::cos(std::numbers::pi * (0.61803398875 * (s + 1) * (j + 1) + 0.5 * j));
      }
      if (dir.norm() < 1e-12) continue;
      dir.normalize();
      const Eigen::VectorXd y = c + (dir.array() * a.array()).matrix();
      max_phi = std::max(max_phi, y.squaredNorm());
      min_phi = std::min(min_phi, y.squaredNorm());
    }
    if (domain.rho(Eigen::VectorXd::Zero(N)) < 0) min_phi = 0.0;
  }
  return 2.0 * std::exp(max_phi - min_phi);
}

CorollaryResult corollary_check(const Domain& domain, const ComplexForm& f, const GridPtr& grid,
                                const PipelineOptions& opts) {
  Calculus calc(grid, Weight::norm_squared(grid->dim()));
  PipelineResult P = solve_poincare_lelong(f, calc, opts);
  CorollaryResult out;
  out.c_omega = corollary_constant(domain);
  const double vol = grid->cell_volume();
  out.unweighted_norm_u2 = P.u.coeffs.cwiseAbs2().sum() * vol;
  out.unweighted_norm_f2 = f.coeffs.cwiseAbs2().sum() * vol;
  out.ratio = rel(out.unweighted_norm_u2, out.unweighted_norm_f2);
  out.within_bound = out.ratio <= out.c_omega * (1.0 + opts.slack);
  out.pipeline = std::move(P.report);
  return out;
}

}  // namespace pellel
