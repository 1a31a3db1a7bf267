#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "pellel/domain.hpp"
#include "pellel/forms.hpp"
#include "pellel/minnorm.hpp"

namespace pellel {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Difference operators on a nested-mask grid. The centred difference along
/// axis j maps level p into level p+1, so mixed differences commute exactly
/// and d(du) = 0 holds to rounding.
///
/// Real axes are 1-based. Complex coordinates are interleaved:
/// z_j = x_{2j-1} + i x_{2j}.
class Calculus {
 public:
  Calculus(GridPtr grid, Weight weight);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Weight& weight() const { return weight_; }
  int dim() const { return grid_->dim(); }

  /// e^{-phi} h^N per node of a level.
  const Eigen::VectorXd& weights(int level) const { return weights_.at(level); }
  /// Node weights repeated once per coefficient (matches RealForm::flat()).
  Eigen::VectorXd tiled_weights(int level, Eigen::Index components) const;

  /// Centred difference along `axis`, level -> level+1.
  const SparseMatrix& derivative(int axis, int level) const;
  /// Weighted adjoint of derivative(axis, level), level+1 -> level.
  const SparseMatrix& derivative_adjoint(int axis, int level) const;
  /// Restriction of level values to level+1 nodes.
  const SparseMatrix& restriction(int level) const { return restrict_.at(level); }
  /// phi_j at the nodes of a level.
  Eigen::VectorXd phi_gradient(int axis, int level) const {
    return phi_grad_.at(level).col(axis - 1);
  }

  /// Exterior derivative; a degree-N form maps to the empty degree-(N+1) form.
  RealForm d(const RealForm& u) const;
  /// Exact adjoint of d for the discrete weighted inner products.
  RealForm t_star_discrete(const RealForm& alpha) const;
  /// Pointwise formal adjoint A_I = -sum_j delta_j alpha_{jI}, with alpha
  /// extended by zero outside its level.
  RealForm t_star_formula(const RealForm& alpha) const;
  /// delta_j g = D_j g - phi_j g, level -> level+1.
  Eigen::VectorXd delta(int axis, const Eigen::VectorXd& g, int level) const;

  /// Wirtinger derivatives d/dz_j and d/dzbar_j, level -> level+1.
  Eigen::VectorXcd dz(int j, const Eigen::VectorXcd& g, int level) const;
  Eigen::VectorXcd dzbar(int j, const Eigen::VectorXcd& g, int level) const;

  /// dbar on (0,0), (1,0), (0,1) forms.
  ComplexForm dbar(const ComplexForm& u) const;
  /// partial on (0,0), (0,1), (1,0) forms.
  ComplexForm partial(const ComplexForm& u) const;
  /// Weighted adjoint of dbar on functions, (0,1) -> (0,0).
  ComplexForm dbar_adjoint(const ComplexForm& g) const;

  /// d on degree-p forms as a map between flattened coefficient vectors.
  /// The returned maps refer to this object and must not outlive it.
  LinearMap<double> d_map(int degree) const;
  /// dbar on functions as a map between flattened coefficient vectors.
  LinearMap<std::complex<double>> dbar_map() const;

 private:
  GridPtr grid_;
  Weight weight_;
  std::vector<Eigen::VectorXd> weights_;
  std::vector<Eigen::MatrixXd> phi_grad_;
  std::vector<std::vector<SparseMatrix>> deriv_;      // [level][axis-1]
  std::vector<std::vector<SparseMatrix>> deriv_adj_;  // [level][axis-1]
  std::vector<SparseMatrix> restrict_;
};

}  // namespace pellel
