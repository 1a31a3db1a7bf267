#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace pellel {

class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvexityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned ellipsoid G = {rho < 0}, rho(x) = sum_j (x_j - c_j)^2 / a_j^2 - 1.
/// A ball is the ellipsoid with equal semi-axes; the kind tag is kept so that
/// reports and closed-form shortcuts can tell them apart.
class Domain {
 public:
  enum class Kind { Ball, Ellipsoid };

  static Domain ball(int dim, double radius,
                     Eigen::VectorXd center = Eigen::VectorXd());
  static Domain ellipsoid(Eigen::VectorXd semi_axes,
                          Eigen::VectorXd center = Eigen::VectorXd());

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(axes_.size()); }
  const Eigen::VectorXd& semi_axes() const { return axes_; }
  const Eigen::VectorXd& center() const { return center_; }
  double radius() const { return axes_.maxCoeff(); }

  double rho(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd rho_gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::MatrixXd rho_hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  double volume() const;

  /// Samples the boundary and checks positive definite Hessian of rho and a
  /// nonvanishing gradient; throws ConvexityError on failure.
  void validate(int samples = 256) const;

  std::string describe() const;

 private:
  Domain(Kind kind, Eigen::VectorXd axes, Eigen::VectorXd center);

  Kind kind_;
  Eigen::VectorXd axes_;
  Eigen::VectorXd center_;
};

/// Smooth weight function phi with analytic gradient and Hessian.
class Weight {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using HessianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  /// phi = x^T A x (A is symmetrised).
  static Weight quadratic(const Eigen::MatrixXd& A);
  /// phi = |x|^2.
  static Weight norm_squared(int dim);
  /// phi = 0.
  static Weight zero(int dim);
  /// phi = |x|^2 + x_1^4.
  static Weight norm_squared_plus_quartic(int dim);
  static Weight custom(int dim, std::string name, ValueFn value,
                       GradientFn gradient, HessianFn hessian);

  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  bool is_quadratic() const { return quadratic_.size() > 0; }
  /// The matrix A of a quadratic weight (empty otherwise).
  const Eigen::MatrixXd& quadratic_matrix() const { return quadratic_; }

  double value(const Eigen::VectorXd& x) const { return value_(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return gradient_(x); }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const { return hessian_(x); }

 private:
  Weight() = default;

  int dim_ = 0;
  std::string name_;
  Eigen::MatrixXd quadratic_;
  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
};

/// Cell-centred uniform lattice x = center + (i + 1/2) h, restricted to a
/// nested family of masks. Level 0 holds the cells whose centres satisfy
/// rho < -margin; level k+1 keeps the level-k cells whose 2N axis neighbours
/// are all in level k. A p-form is sampled on level p, so a centred
/// difference always maps level p into level p+1.
class Grid {
 public:
  static Grid build(const Domain& domain, double h, double margin = 0.0);

  int dim() const { return dim_; }
  double spacing() const { return h_; }
  double margin() const { return margin_; }
  double cell_volume() const { return cell_volume_; }
  int levels() const { return static_cast<int>(levels_.size()); }

  Eigen::Index size(int level) const;
  const Eigen::MatrixXd& coords(int level) const;
  Eigen::VectorXd point(int level, Eigen::Index node) const {
    return coords(level).row(node).transpose();
  }

  /// Lattice linear index of a node.
  std::int64_t lattice_index(int level, Eigen::Index node) const;
  /// Node index at `level` of a lattice cell, or -1 if not in that level.
  Eigen::Index find(int level, std::int64_t lattice) const;
  /// Lattice index shifted by `step` cells along axis (1-based); -1 if it
  /// leaves the lattice box.
  std::int64_t shift(std::int64_t lattice, int axis, int step) const;

  /// Level-0 nodes that are missing from level 1.
  bool boundary_adjacent(Eigen::Index node) const;

  /// For every node of level `to`, its index within level `from` (from <= to).
  std::vector<Eigen::Index> embedding(int from, int to) const;

 private:
  struct Level {
    std::vector<std::int64_t> lattice;
    std::vector<Eigen::Index> lookup;
    Eigen::MatrixXd coords;
  };

  int dim_ = 0;
  double h_ = 0;
  double margin_ = 0;
  double cell_volume_ = 0;
  std::vector<std::int64_t> extent_;  // cells per axis
  std::vector<std::int64_t> stride_;
  Eigen::VectorXd origin_;  // lower corner of the lattice box
  std::vector<Level> levels_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr build_grid(const Domain& domain, double h, double margin = 0.0) {
  return std::make_shared<const Grid>(Grid::build(domain, h, margin));
}

/// min over level-0 nodes of the smallest Hessian eigenvalue of phi.
double estimate_c(const Weight& weight, const Grid& grid);

/// Nodes on the boundary with surface-measure weights (for dS) and |grad rho|
/// at each node, so integrals against dS/|grad rho| use ds_weights / grad_norm.
struct BoundaryQuadrature {
  Eigen::MatrixXd points;   // m x N
  Eigen::VectorXd ds_weights;
  Eigen::VectorXd grad_norm;

  Eigen::Index size() const { return points.rows(); }
  Eigen::VectorXd weights_over_grad() const {
    return ds_weights.cwiseQuotient(grad_norm);
  }
};

/// Trapezoid in the angle (N = 2), Gauss-Legendre x trapezoid (N = 3).
BoundaryQuadrature boundary_quadrature(const Domain& domain, int m);

/// Points and weights approximating integrals over G.
struct InteriorQuadrature {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
  Eigen::Index size() const { return points.rows(); }
};

/// Cut-cell midpoint rule on the grid lattice: every cell meeting G
/// contributes its centre with weight |cell ∩ G|. The cut areas are exact up
/// to Gauss-Legendre precision for N = 2; other dimensions fall back to the
/// plain h^N rule on level-0 nodes.
InteriorQuadrature interior_quadrature(const Domain& domain, double h);

/// n-point Gauss-Legendre rule on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

}  // namespace pellel
