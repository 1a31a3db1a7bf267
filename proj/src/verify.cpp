#include "pellel/verify.hpp"

#include <cmath>
#include <vector>

namespace pellel {

namespace {

/// Index sequence (j, I) for a multiindex I of degree p.
std::vector<int> with_front(int j, const MultiIndex& I) {
  std::vector<int> s{j};
  s.insert(s.end(), I.indices().begin(), I.indices().end());
  return s;
}

/// Polynomials alpha_{jI} for every lower index I and every axis j.
std::vector<std::vector<Polynomial>> contracted(const PolyForm& alpha) {
  const int N = alpha.dim();
  const auto lower = enumerate(N, alpha.degree() - 1);
  std::vector<std::vector<Polynomial>> out(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    for (int j = 1; j <= N; ++j) out[i].push_back(alpha.at(with_front(j, lower[i])));
  }
  return out;
}

/// Pointwise integrands shared by the Bochner identity and the basic estimate.
struct Integrands {
  const PolyForm& alpha;
  const Weight& weight;
  int N;
  PolyForm dalpha;
  std::vector<std::vector<Polynomial>> aj;                  // alpha_{jI}
  std::vector<std::vector<Polynomial>> grad;                // d_j alpha_J, per J
  std::vector<std::vector<Polynomial>> div;                 // d_j alpha_{jI}

  Integrands(const PolyForm& a, const Weight& w)
      : alpha(a), weight(w), N(a.dim()), dalpha(a.d()), aj(contracted(a)) {
    for (const auto& c : a.components()) {
      std::vector<Polynomial> g;
      for (int j = 1; j <= N; ++j) g.push_back(c.derivative(j));
      grad.push_back(std::move(g));
    }
    for (const auto& row : aj) {
      std::vector<Polynomial> g;
      for (int j = 1; j <= N; ++j) g.push_back(row[static_cast<std::size_t>(j - 1)].derivative(j));
      div.push_back(std::move(g));
    }
  }

  Eigen::VectorXd tstar(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd g = weight.gradient(x);
    Eigen::VectorXd A = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(aj.size()));
    for (std::size_t i = 0; i < aj.size(); ++i) {
      for (int j = 0; j < N; ++j) {
        A[static_cast<Eigen::Index>(i)] +=
            -div[i][static_cast<std::size_t>(j)](x) + g[j] * aj[i][static_cast<std::size_t>(j)](x);
      }
    }
    return A;
  }

  Eigen::VectorXd lower_values(std::size_t i, const Eigen::VectorXd& x) const {
    Eigen::VectorXd v(N);
    for (int j = 0; j < N; ++j) v[j] = aj[i][static_cast<std::size_t>(j)](x);
    return v;
  }

  double hessian_term(const Eigen::VectorXd& x, const Eigen::MatrixXd& H) const {
    double s = 0.0;
    for (std::size_t i = 0; i < aj.size(); ++i) {
      const Eigen::VectorXd v = lower_values(i, x);
      s += v.dot(H * v);
    }
    return s;
  }

  double gradient_term(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (const auto& g : grad) {
      for (const auto& p : g) s += std::pow(p(x), 2);
    }
    return s;
  }

  double dalpha2(const Eigen::VectorXd& x) const {
    return dalpha.components().empty() ? 0.0 : dalpha.evaluate(x).squaredNorm();
  }
};

struct Sums {
  double tstar2 = 0, dalpha2 = 0, hessian = 0, gradient = 0, norm_alpha2 = 0, boundary = 0;
};

Sums integrate(const PolyForm& alpha, const Weight& weight, const Domain& domain, double h,
               const BoundaryQuadrature& quad) {
  if (alpha.dim() != domain.dim() || weight.dim() != domain.dim()) {
    throw std::invalid_argument("form, weight and domain dimensions differ");
  }
  if (alpha.degree() < 1) throw DomainError("the identity needs a form of degree >= 1");
  const Integrands I(alpha, weight);
  Sums s;
  const InteriorQuadrature iq = interior_quadrature(domain, h);
  for (Eigen::Index k = 0; k < iq.size(); ++k) {
    const Eigen::VectorXd x = iq.points.row(k).transpose();
    const double w = iq.weights[k] * std::exp(-weight.value(x));
    s.tstar2 += w * I.tstar(x).squaredNorm();
    s.dalpha2 += w * I.dalpha2(x);
    s.hessian += w * I.hessian_term(x, weight.hessian(x));
    s.gradient += w * I.gradient_term(x);
    s.norm_alpha2 += w * alpha.evaluate(x).squaredNorm();
  }
  const Eigen::VectorXd bw = quad.weights_over_grad();
  for (Eigen::Index k = 0; k < quad.size(); ++k) {
    const Eigen::VectorXd x = quad.points.row(k).transpose();
    s.boundary += bw[k] * std::exp(-weight.value(x)) * I.hessian_term(x, domain.rho_hessian(x));
  }
  return s;
}

}  // namespace

IdentityCheck check_dalpha_identity(const PolyForm& alpha, const Eigen::MatrixXd& points) {
  const int N = alpha.dim();
  if (points.cols() != N) throw std::invalid_argument("points have the wrong dimension");
  if (alpha.degree() < 1) throw DomainError("the identity needs a form of degree >= 1");
  const PolyForm da = alpha.d();
  const auto aj = contracted(alpha);
  // Derivatives d_k alpha_{jI} per lower index I.
  std::vector<std::vector<std::vector<Polynomial>>> dd(aj.size());
  for (std::size_t i = 0; i < aj.size(); ++i) {
    for (int j = 0; j < N; ++j) {
      std::vector<Polynomial> row;
      for (int k = 1; k <= N; ++k) row.push_back(aj[i][static_cast<std::size_t>(j)].derivative(k));
      dd[i].push_back(std::move(row));
    }
  }
  IdentityCheck out;
  out.points = points.rows();
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    const Eigen::VectorXd x = points.row(r).transpose();
    const double lhs = da.components().empty() ? 0.0 : da.evaluate(x).squaredNorm();
    double grad = 0.0;
    for (const auto& c : alpha.components()) {
      for (int j = 1; j <= N; ++j) grad += std::pow(c.derivative(j)(x), 2);
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < aj.size(); ++i) {
      for (int j = 0; j < N; ++j) {
        for (int k = 0; k < N; ++k) {
          // d_j alpha_{kI} * d_k alpha_{jI}
          cross += dd[i][static_cast<std::size_t>(k)][static_cast<std::size_t>(j)](x) *
                   dd[i][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)](x);
        }
      }
    }
    const double rhs = grad - cross;
    out.max_deviation = std::max(out.max_deviation, std::abs(lhs - rhs));
    out.scale = std::max({out.scale, std::abs(lhs), std::abs(rhs)});
  }
  return out;
}

double boundary_condition_violation(const PolyForm& alpha, const Domain& domain,
                                    const BoundaryQuadrature& quad) {
  const auto aj = contracted(alpha);
  double worst = 0.0, scale = 0.0;
  for (Eigen::Index k = 0; k < quad.size(); ++k) {
    const Eigen::VectorXd x = quad.points.row(k).transpose();
    const Eigen::VectorXd g = domain.rho_gradient(x);
    scale = std::max(scale, alpha.evaluate(x).norm() * g.norm());
    for (const auto& row : aj) {
      double s = 0.0;
      for (int j = 0; j < alpha.dim(); ++j) s += row[static_cast<std::size_t>(j)](x) * g[j];
      worst = std::max(worst, std::abs(s));
    }
  }
  return scale > 0 ? worst / scale : worst;
}

IdentityCheck check_boundary_identity(const PolyForm& alpha, const Domain& domain,
                                      const BoundaryQuadrature& quad) {
  const int N = alpha.dim();
  if (N != domain.dim()) throw std::invalid_argument("form and domain dimensions differ");
  if (alpha.degree() < 1) throw DomainError("the identity needs a form of degree >= 1");
  const double violation = boundary_condition_violation(alpha, domain, quad);
  if (violation > 1e-10) {
    throw PreconditionError("form is not tangential on the boundary (relative violation " +
                                std::to_string(violation) + ")",
                            violation);
  }
  const auto aj = contracted(alpha);
  IdentityCheck out;
  out.points = quad.size();
  for (Eigen::Index q = 0; q < quad.size(); ++q) {
    const Eigen::VectorXd x = quad.points.row(q).transpose();
    const Eigen::VectorXd g = domain.rho_gradient(x);
    const Eigen::MatrixXd H = domain.rho_hessian(x);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& row : aj) {
      Eigen::VectorXd a(N);
      for (int j = 0; j < N; ++j) a[j] = row[static_cast<std::size_t>(j)](x);
      for (int k = 1; k <= N; ++k) {
        for (int j = 0; j < N; ++j) {
          lhs += a[k - 1] * row[static_cast<std::size_t>(j)].derivative(k)(x) * g[j];
        }
      }
      rhs -= a.dot(H * a);
    }
    out.max_deviation = std::max(out.max_deviation, std::abs(lhs - rhs));
    out.scale = std::max({out.scale, std::abs(lhs), std::abs(rhs)});
  }
  return out;
}

BochnerTerms check_bochner_identity(const PolyForm& alpha, const Weight& weight,
                                    const Domain& domain, double h,
                                    const BoundaryQuadrature& quad) {
  const double violation = boundary_condition_violation(alpha, domain, quad);
  if (violation > 1e-10) {
    throw PreconditionError("form is not tangential on the boundary (relative violation " +
                                std::to_string(violation) + ")",
                            violation);
  }
  const Sums s = integrate(alpha, weight, domain, h, quad);
  BochnerTerms t;
  t.tstar2 = s.tstar2;
  t.dalpha2 = s.dalpha2;
  t.hessian = s.hessian;
  t.gradient = s.gradient;
  t.boundary = s.boundary;
  t.norm_alpha2 = s.norm_alpha2;
  t.lhs = s.tstar2 + s.dalpha2;
  t.rhs = s.hessian + s.gradient + s.boundary;
  const double scale = std::max(std::abs(t.lhs), std::abs(t.rhs));
  t.deviation = scale > 0 ? std::abs(t.lhs - t.rhs) / scale : 0.0;
  return t;
}

BasicEstimate check_basic_estimate(const PolyForm& alpha, const Weight& weight,
                                   const Domain& domain, double h,
                                   const BoundaryQuadrature& quad, std::optional<double> c) {
  BasicEstimate e;
  e.c = c ? *c : estimate_c(weight, Grid::build(domain, h));
  const Sums s = integrate(alpha, weight, domain, h, quad);
  e.lhs = s.tstar2 + s.dalpha2;
  e.norm_alpha2 = s.norm_alpha2;
  const double floor = e.c * alpha.degree() * e.norm_alpha2;
  e.margin = e.lhs - floor;
  e.relative_margin = floor > 0 ? e.margin / floor : 0.0;
  return e;
}

Eigen::VectorXd t_star_formula_at(const PolyForm& alpha, const Weight& weight,
                                  const Eigen::VectorXd& x) {
  return Integrands(alpha, weight).tstar(x);
}

}  // namespace pellel
