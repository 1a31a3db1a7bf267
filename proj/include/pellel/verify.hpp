#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "pellel/domain.hpp"
#include "pellel/polynomial.hpp"

namespace pellel {

class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(const std::string& what, double violation)
      : std::runtime_error(what), violation_(violation) {}
  double violation() const { return violation_; }

 private:
  double violation_;
};

struct IdentityCheck {
  double max_deviation = 0.0;  // max |lhs - rhs| over the points
  double scale = 0.0;          // max(|lhs|, |rhs|) over the points
  Eigen::Index points = 0;
  /// max_deviation / max(1, scale).
  double relative() const { return max_deviation / std::max(1.0, scale); }
};

/// |d alpha|^2 against sum' sum_j |d_j alpha_J|^2 - sum' sum_{j,k} d_j alpha_{kI} d_k alpha_{jI}
/// at each row of `points`.
IdentityCheck check_dalpha_identity(const PolyForm& alpha, const Eigen::MatrixXd& points);

/// sum_I sum_{j,k} alpha_{kI} (d_k alpha_{jI}) rho_j against
/// -sum_I sum_{j,k} alpha_{jI} alpha_{kI} rho_{jk} at the boundary nodes. Throws
/// PreconditionError unless sum_j alpha_{jI} rho_j vanishes there.
IdentityCheck check_boundary_identity(const PolyForm& alpha, const Domain& domain,
                                      const BoundaryQuadrature& quad);

/// Largest |sum_j alpha_{jI} rho_j| on the boundary nodes, relative to max |alpha| |grad rho|.
double boundary_condition_violation(const PolyForm& alpha, const Domain& domain,
                                    const BoundaryQuadrature& quad);

struct BochnerTerms {
  double tstar2 = 0.0;     // |T* alpha|^2 with the formal adjoint
  double dalpha2 = 0.0;    // |d alpha|^2
  double hessian = 0.0;    // int sum phi_jk alpha_jI alpha_kI e^{-phi}
  double gradient = 0.0;   // int sum |d_j alpha_J|^2 e^{-phi}
  double boundary = 0.0;   // int_{bG} sum rho_jk alpha_jI alpha_kI e^{-phi} dS / |grad rho|
  double norm_alpha2 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// |lhs - rhs| / max(|lhs|, |rhs|).
  double deviation = 0.0;
};

/// All weighted integrals with the cut-cell interior rule at spacing h and
/// the given boundary rule; T* alpha from the formal adjoint evaluated exactly.
BochnerTerms check_bochner_identity(const PolyForm& alpha, const Weight& weight,
                                    const Domain& domain, double h,
                                    const BoundaryQuadrature& quad);

struct BasicEstimate {
  double lhs = 0.0;  // |T* alpha|^2 + |d alpha|^2
  double c = 0.0;
  double norm_alpha2 = 0.0;
  double margin = 0.0;           // lhs - c (p+1) |alpha|^2
  double relative_margin = 0.0;  // margin / (c (p+1) |alpha|^2)
};

/// c defaults to estimate_c on the grid of spacing h.
BasicEstimate check_basic_estimate(const PolyForm& alpha, const Weight& weight,
                                   const Domain& domain, double h,
                                   const BoundaryQuadrature& quad,
                                   std::optional<double> c = std::nullopt);

/// Formal adjoint A_I = sum_j (-d_j alpha_{jI} + phi_j alpha_{jI}) at a point.
Eigen::VectorXd t_star_formula_at(const PolyForm& alpha, const Weight& weight,
                                  const Eigen::VectorXd& x);

}  // namespace pellel
