#include "pellel/domain.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace pellel {

Domain::Domain(Kind kind, Eigen::VectorXd axes, Eigen::VectorXd center)
    : kind_(kind), axes_(std::move(axes)), center_(std::move(center)) {
  if (axes_.size() < 1) throw std::invalid_argument("domain dimension must be >= 1");
  if ((axes_.array() <= 0).any()) throw std::invalid_argument("semi-axes must be positive");
  if (center_.size() == 0) center_ = Eigen::VectorXd::Zero(axes_.size());
  if (center_.size() != axes_.size()) throw std::invalid_argument("center dimension mismatch");
}

Domain Domain::ball(int dim, double radius, Eigen::VectorXd center) {
  return Domain(Kind::Ball, Eigen::VectorXd::Constant(dim, radius), std::move(center));
}

Domain Domain::ellipsoid(Eigen::VectorXd semi_axes, Eigen::VectorXd center) {
  return Domain(Kind::Ellipsoid, std::move(semi_axes), std::move(center));
}

double Domain::rho(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return ((x - center_).array() / axes_.array()).square().sum() - 1.0;
}

Eigen::VectorXd Domain::rho_gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return 2.0 * (x - center_).array() / axes_.array().square();
}

Eigen::MatrixXd Domain::rho_hessian(const Eigen::Ref<const Eigen::VectorXd>&) const {
  return (2.0 / axes_.array().square()).matrix().asDiagonal();
}

double Domain::volume() const {
  const int n = dim();
  // Unit ball volume pi^{n/2} / Gamma(n/2 + 1).
  const double unit = std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
  return unit * axes_.prod();
}

void Domain::validate(int samples) const {
  // Deterministic sample of boundary points along rays.
  const int n = dim();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd dir(n);
    for (int j = 0; j < n; ++j) dir[j] = std::cos(0.7 * s + 1.3 * j * (s + 1));
    if (dir.norm() < 1e-8) continue;
    dir.normalize();
    const Eigen::VectorXd y = center_ + (dir.array() * axes_.array()).matrix();
    const double g = rho_gradient(y).norm();
    if (!(g > 0)) throw ConvexityError("defining function has vanishing gradient on boundary");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho_hessian(y));
    if (es.eigenvalues().minCoeff() <= 0) {
      throw ConvexityError("defining function is not strictly convex on boundary");
    }
  }
}

std::string Domain::describe() const {
  std::ostringstream os;
  os << (kind_ == Kind::Ball ? "ball" : "ellipsoid") << "(N=" << dim() << ", axes=["
     << axes_.transpose() << "])";
  return os.str();
}

Weight Weight::quadratic(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("quadratic weight needs square matrix");
  Weight w;
  w.dim_ = static_cast<int>(A.rows());
  w.name_ = "quadratic";
  w.quadratic_ = 0.5 * (A + A.transpose());
  const Eigen::MatrixXd S = w.quadratic_;
  w.value_ = [S](const Eigen::VectorXd& x) { return x.dot(S * x); };
  w.gradient_ = [S](const Eigen::VectorXd& x) -> Eigen::VectorXd { return 2.0 * S * x; };
  w.hessian_ = [S](const Eigen::VectorXd&) -> Eigen::MatrixXd { return 2.0 * S; };
  return w;
}

Weight Weight::norm_squared(int dim) {
  Weight w = quadratic(Eigen::MatrixXd::Identity(dim, dim));
  w.name_ = "norm_squared";
  return w;
}

Weight Weight::zero(int dim) {
  Weight w = quadratic(Eigen::MatrixXd::Zero(dim, dim));
  w.name_ = "zero";
  return w;
}

Weight Weight::norm_squared_plus_quartic(int dim) {
  return custom(
      dim, "norm_squared_plus_quartic",
      [](const Eigen::VectorXd& x) { return x.squaredNorm() + std::pow(x[0], 4); },
      [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd g = 2.0 * x;
        g[0] += 4.0 * std::pow(x[0], 3);
        return g;
      },
      [dim](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
        Eigen::MatrixXd H = 2.0 * Eigen::MatrixXd::Identity(dim, dim);
        H(0, 0) += 12.0 * x[0] * x[0];
        return H;
      });
}

Weight Weight::custom(int dim, std::string name, ValueFn value, GradientFn gradient,
                      HessianFn hessian) {
  Weight w;
  w.dim_ = dim;
  w.name_ = std::move(name);
  w.value_ = std::move(value);
  w.gradient_ = std::move(gradient);
  w.hessian_ = std::move(hessian);
  return w;
}

Grid Grid::build(const Domain& domain, double h, double margin) {
  if (!(h > 0)) throw std::invalid_argument("grid spacing must be positive");
  if (margin < 0) throw std::invalid_argument("margin must be nonnegative");
  Grid g;
  g.dim_ = domain.dim();
  g.h_ = h;
  g.margin_ = margin;
  g.cell_volume_ = std::pow(h, g.dim_);
  g.extent_.resize(g.dim_);
  g.stride_.resize(g.dim_);
  g.origin_.resize(g.dim_);
  std::int64_t total = 1;
  for (int j = 0; j < g.dim_; ++j) {
    // Cells [c + i h, c + (i+1) h] for i in [-K, K), enough to cover the axis.
    const auto K = static_cast<std::int64_t>(std::ceil(domain.semi_axes()[j] / h)) + 1;
    g.extent_[j] = 2 * K;
    g.origin_[j] = domain.center()[j] - static_cast<double>(K) * h;
    g.stride_[j] = total;
    total *= g.extent_[j];
  }
  if (total > (std::int64_t{1} << 31)) throw ResolutionError("grid lattice too large");

  Level base;
  base.lookup.assign(static_cast<std::size_t>(total), -1);
  Eigen::VectorXd x(g.dim_);
  std::vector<std::int64_t> idx(g.dim_, 0);
  for (std::int64_t lin = 0; lin < total; ++lin) {
    std::int64_t r = lin;
    for (int j = 0; j < g.dim_; ++j) {
      idx[j] = r % g.extent_[j];
      r /= g.extent_[j];
      x[j] = g.origin_[j] + (static_cast<double>(idx[j]) + 0.5) * h;
    }
    if (domain.rho(x) < -margin) {
      base.lookup[lin] = static_cast<Eigen::Index>(base.lattice.size());
      base.lattice.push_back(lin);
    }
  }
  if (base.lattice.empty()) {
    throw ResolutionError("grid has no interior nodes at h = " + std::to_string(h));
  }
  g.levels_.push_back(std::move(base));

  for (int k = 1; k <= g.dim_; ++k) {
    const Level& prev = g.levels_.back();
    Level next;
    next.lookup.assign(static_cast<std::size_t>(total), -1);
    for (std::int64_t lin : prev.lattice) {
      bool keep = true;
      for (int j = 1; j <= g.dim_ && keep; ++j) {
        for (int step : {-1, 1}) {
          const auto nb = g.shift(lin, j, step);
          if (nb < 0 || prev.lookup[nb] < 0) {
            keep = false;
            break;
          }
        }
      }
      if (keep) {
        next.lookup[lin] = static_cast<Eigen::Index>(next.lattice.size());
        next.lattice.push_back(lin);
      }
    }
    g.levels_.push_back(std::move(next));
  }

  for (auto& level : g.levels_) {
    level.coords.resize(static_cast<Eigen::Index>(level.lattice.size()), g.dim_);
    for (std::size_t n = 0; n < level.lattice.size(); ++n) {
      std::int64_t r = level.lattice[n];
      for (int j = 0; j < g.dim_; ++j) {
        level.coords(static_cast<Eigen::Index>(n), j) =
            g.origin_[j] + (static_cast<double>(r % g.extent_[j]) + 0.5) * h;
        r /= g.extent_[j];
      }
    }
  }
  return g;
}

Eigen::Index Grid::size(int level) const {
  if (level < 0 || level >= levels()) return 0;
  return static_cast<Eigen::Index>(levels_[level].lattice.size());
}

const Eigen::MatrixXd& Grid::coords(int level) const { return levels_.at(level).coords; }

std::int64_t Grid::lattice_index(int level, Eigen::Index node) const {
  return levels_.at(level).lattice.at(static_cast<std::size_t>(node));
}

Eigen::Index Grid::find(int level, std::int64_t lattice) const {
  if (level < 0 || level >= levels() || lattice < 0) return -1;
  return levels_[level].lookup[static_cast<std::size_t>(lattice)];
}

std::int64_t Grid::shift(std::int64_t lattice, int axis, int step) const {
  const int j = axis - 1;
  const std::int64_t coord = (lattice / stride_[j]) % extent_[j] + step;
  if (coord < 0 || coord >= extent_[j]) return -1;
  return lattice + step * stride_[j];
}

bool Grid::boundary_adjacent(Eigen::Index node) const {
  return levels() < 2 || find(1, lattice_index(0, node)) < 0;
}

std::vector<Eigen::Index> Grid::embedding(int from, int to) const {
  if (from > to) throw std::invalid_argument("embedding requires from <= to");
  std::vector<Eigen::Index> out(static_cast<std::size_t>(size(to)));
  for (Eigen::Index n = 0; n < size(to); ++n) {
    out[static_cast<std::size_t>(n)] = find(from, lattice_index(to, n));
  }
  return out;
}

double estimate_c(const Weight& weight, const Grid& grid) {
  double c = std::numeric_limits<double>::infinity();
  const auto& X = grid.coords(0);
  for (Eigen::Index n = 0; n < X.rows(); ++n) {
    const Eigen::MatrixXd H = weight.hessian(X.row(n).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()),
                                                       Eigen::EigenvaluesOnly);
    c = std::min(c, es.eigenvalues()[0]);
  }
  if (!(c > 0)) {
    throw ConvexityError("weight is not uniformly convex on the grid (min eigenvalue " +
                         std::to_string(c) + ")");
  }
  return c;
}

}  // namespace pellel
