#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace pellel {

/// Matrix-free operator between two weighted coefficient spaces. The inner
/// products are <a, b> = sum_k w_k a_k conj(b_k) with the per-entry weights
/// stored here, and `adjoint` must be the adjoint with respect to them.
template <typename Scalar>
struct LinearMap {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> adjoint;
  Eigen::VectorXd source_weights;
  Eigen::VectorXd target_weights;

  Eigen::Index source_size() const { return source_weights.size(); }
  Eigen::Index target_size() const { return target_weights.size(); }

  Scalar source_inner(const Vector& a, const Vector& b) const {
    return (source_weights.cast<Scalar>().array() * a.array() * b.conjugate().array()).sum();
  }
  Scalar target_inner(const Vector& a, const Vector& b) const {
    return (target_weights.cast<Scalar>().array() * a.array() * b.conjugate().array()).sum();
  }
  double source_norm2(const Vector& a) const {
    return source_weights.dot(a.cwiseAbs2());
  }
  double target_norm2(const Vector& a) const {
    return target_weights.dot(a.cwiseAbs2());
  }
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double solution_norm2 = 0.0;
  double rhs_norm2 = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  bool converged = false;
  /// Relative size of the part of f orthogonal to the range, when the solver
  /// stopped at the least-squares optimum (0 otherwise).
  double range_defect = 0.0;
  std::string status;
  std::vector<double> residual_history;
};

class NotInRangeError : public std::runtime_error {
 public:
  NotInRangeError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

struct SolveOptions {
  double tol = 1e-8;
  /// 0 selects 10 x (number of unknowns).
  int maxiter = 0;
  int refinements = 2;
  bool keep_history = true;
};

template <typename Scalar>
struct MinNormResult {
  typename LinearMap<Scalar>::Vector u;
  SolveReport report;
};

namespace detail {

/// Conjugate residuals on A A* lambda = f in the target inner product,
/// returning u = A* lambda. Tracks A* r and A* p so only one application of
/// A and one of A* are needed per step.
template <typename Scalar>
typename LinearMap<Scalar>::Vector conjugate_residuals(const LinearMap<Scalar>& A,
                                                       const typename LinearMap<Scalar>::Vector& f,
                                                       double tol, int maxiter,
                                                       SolveReport& report, bool keep_history) {
  using Vector = typename LinearMap<Scalar>::Vector;
  const double fnorm = std::sqrt(A.target_norm2(f));
  Vector u = Vector::Zero(A.source_size());
  Vector r = f;
  Vector sr = A.adjoint(r);
  Vector sp = sr;
  Vector Mr = A.apply(sr);
  Vector Mp = Mr;
  double rho = A.source_norm2(sr);
  const double sf = std::sqrt(rho);
  double rnorm = fnorm;
  double normA = 0.0;
  if (keep_history) report.residual_history.push_back(1.0);
  report.status = "max_iterations";
  for (int k = 0; k < maxiter; ++k) {
    if (rnorm <= tol * fnorm) {
      report.status = "converged";
      break;
    }
    const double Mp2 = A.target_norm2(Mp);
    const double pnorm2 = A.source_norm2(sp);
    if (pnorm2 > 0) normA = std::max(normA, std::sqrt(Mp2 / pnorm2));
    if (!(Mp2 > 0) || std::sqrt(rho) <= tol * normA * rnorm ||
        std::sqrt(rho) <= std::numeric_limits<double>::epsilon() * sf) {
      report.status = "least_squares";
      break;
    }
    const double alpha = rho / Mp2;
    u += alpha * sp;
    r -= alpha * Mp;
    rnorm = std::sqrt(A.target_norm2(r));
    ++report.iterations;
    if (keep_history) report.residual_history.push_back(rnorm / fnorm);
    sr = A.adjoint(r);
    Mr = A.apply(sr);
    const double rho_new = A.source_norm2(sr);
    const double beta = rho_new / rho;
    rho = rho_new;
    sp = sr + beta * sp;
    Mp = Mr + beta * Mp;
  }
  if (report.status == "max_iterations" && rnorm <= tol * fnorm) report.status = "converged";
  return u;
}

}  // namespace detail

/// Minimum-norm solution u = A* lambda of A u = f. When f has a component
/// outside the range of A the solver stops at the least-squares optimum and
/// reports the relative size of that component in range_defect; if f is
/// (numerically) orthogonal to the range it throws NotInRangeError.
template <typename Scalar>
MinNormResult<Scalar> solve_min_norm(const LinearMap<Scalar>& A,
                                     const typename LinearMap<Scalar>::Vector& f,
                                     const SolveOptions& opts = {}) {
  using Vector = typename LinearMap<Scalar>::Vector;
  if (f.size() != A.target_size()) throw std::invalid_argument("rhs size does not match operator");
  if (!(opts.tol > 0)) throw std::invalid_argument("solver tolerance must be positive");
  MinNormResult<Scalar> out;
  SolveReport& rep = out.report;
  rep.rhs_norm2 = A.target_norm2(f);
  if (!std::isfinite(rep.rhs_norm2)) throw std::invalid_argument("rhs has non-finite entries");
  if (rep.rhs_norm2 == 0.0) {
    out.u = Vector::Zero(A.source_size());
    rep.converged = true;
    rep.status = "zero_rhs";
    if (opts.keep_history) rep.residual_history.push_back(0.0);
    return out;
  }
  const int maxiter =
      opts.maxiter > 0 ? opts.maxiter
                       : static_cast<int>(std::min<std::int64_t>(
                             10 * static_cast<std::int64_t>(A.target_size()),
                             std::numeric_limits<int>::max()));
  const double fnorm = std::sqrt(rep.rhs_norm2);

  out.u = detail::conjugate_residuals(A, f, opts.tol, maxiter, rep, opts.keep_history);
  Vector r = f - A.apply(out.u);
  double rel = std::sqrt(A.target_norm2(r)) / fnorm;
  // Recurrence drift: correct with a fresh solve on the true residual.
  for (int pass = 0; pass < opts.refinements && rep.status == "converged" && rel > opts.tol;
       ++pass) {
    SolveReport inner;
    const Vector du = detail::conjugate_residuals(A, r, opts.tol * fnorm / std::sqrt(
                                                                A.target_norm2(r)),
                                                  std::max(1, maxiter - rep.iterations), inner,
                                                  false);
    rep.iterations += inner.iterations;
    out.u += du;
    r = f - A.apply(out.u);
    rel = std::sqrt(A.target_norm2(r)) / fnorm;
    if (inner.status != "converged") rep.status = inner.status;
  }

  rep.relative_residual = rel;
  rep.solution_norm2 = A.source_norm2(out.u);
  rep.ratio = rep.solution_norm2 / rep.rhs_norm2;
  if (rep.status == "least_squares") {
    rep.range_defect = rel;
    if (rel >= 1.0 - 1e-6) {
      throw NotInRangeError("right-hand side is orthogonal to the range (residual " +
                                std::to_string(rel) + " of |f|)",
                            rep);
    }
    rep.converged = true;
  } else {
    rep.converged = rel <= opts.tol;
    if (!rep.converged && rep.status == "converged") rep.status = "stagnated";
  }
  return out;
}

/// Largest relative defect |<Au, b> - <u, A*b>| / (|Au| |b|) over random probes.
template <typename Scalar>
double adjointness_defect(const LinearMap<Scalar>& A, int probes, std::uint64_t seed) {
  using Vector = typename LinearMap<Scalar>::Vector;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto draw = [&](Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      if constexpr (std::is_same_v<Scalar, double>) {
        v[k] = normal(rng);
      } else {
        v[k] = Scalar(normal(rng), normal(rng));
      }
    }
    return v;
  };
  double worst = 0.0;
  for (int t = 0; t < probes; ++t) {
    const Vector u = draw(A.source_size());
    const Vector b = draw(A.target_size());
    const Vector Au = A.apply(u);
    const Scalar lhs = A.target_inner(Au, b);
    const Scalar rhs = A.source_inner(u, A.adjoint(b));
    const double scale = std::sqrt(A.target_norm2(Au) * A.target_norm2(b)) +
                         std::sqrt(A.source_norm2(u) * A.source_norm2(A.adjoint(b)));
    if (scale > 0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

}  // namespace pellel
