#include "pellel/calculus.hpp"

#include <cmath>

namespace pellel {

namespace {

using Triplet = Eigen::Triplet<double>;

int pair_position(int k, int j, int n) {
  return static_cast<int>(MultiIndex({k, j}, n).position());
}

}  // namespace

Calculus::Calculus(GridPtr grid, Weight weight) : grid_(std::move(grid)), weight_(std::move(weight)) {
  if (!grid_) throw std::invalid_argument("calculus needs a grid");
  if (weight_.dim() != grid_->dim()) throw std::invalid_argument("weight/grid dimension mismatch");
  const Grid& g = *grid_;
  const int N = g.dim();
  const double h = g.spacing();
  std::vector<Eigen::VectorXd> phi(g.levels());
  for (int p = 0; p < g.levels(); ++p) {
    const Eigen::Index n = g.size(p);
    phi[p].resize(n);
    weights_.emplace_back(n);
    phi_grad_.emplace_back(n, N);
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::VectorXd x = g.point(p, k);
      phi[p][k] = weight_.value(x);
      weights_[p][k] = std::exp(-phi[p][k]) * g.cell_volume();
      phi_grad_[p].row(k) = weight_.gradient(x).transpose();
    }
  }
  for (int p = 0; p + 1 < g.levels(); ++p) {
    const Eigen::Index rows = g.size(p + 1);
    const Eigen::Index cols = g.size(p);
    std::vector<SparseMatrix> D, Dadj;
    for (int j = 1; j <= N; ++j) {
      std::vector<Triplet> t, ta;
      t.reserve(2 * rows);
      ta.reserve(2 * rows);
      for (Eigen::Index y = 0; y < rows; ++y) {
        const auto lin = g.lattice_index(p + 1, y);
        for (int step : {-1, 1}) {
          const Eigen::Index x = g.find(p, g.shift(lin, j, step));
          const double c = step / (2.0 * h);
          t.emplace_back(y, x, c);
          // (W_p^{-1} D^T W_{p+1})_{x,y} = D_{y,x} e^{phi(x) - phi(y)}
          ta.emplace_back(x, y, c * std::exp(phi[p][x] - phi[p + 1][y]));
        }
      }
      SparseMatrix M(rows, cols), Ma(cols, rows);
      M.setFromTriplets(t.begin(), t.end());
      Ma.setFromTriplets(ta.begin(), ta.end());
      D.push_back(std::move(M));
      Dadj.push_back(std::move(Ma));
    }
    deriv_.push_back(std::move(D));
    deriv_adj_.push_back(std::move(Dadj));

    std::vector<Triplet> tr;
    const auto emb = g.embedding(p, p + 1);
    for (Eigen::Index y = 0; y < rows; ++y) tr.emplace_back(y, emb[static_cast<std::size_t>(y)], 1.0);
    SparseMatrix R(rows, cols);
    R.setFromTriplets(tr.begin(), tr.end());
    restrict_.push_back(std::move(R));
  }
}

Eigen::VectorXd Calculus::tiled_weights(int level, Eigen::Index components) const {
  return weights(level).replicate(components, 1);
}

const SparseMatrix& Calculus::derivative(int axis, int level) const {
  if (axis < 1 || axis > dim()) throw DomainError("axis out of range");
  return deriv_.at(level).at(axis - 1);
}

const SparseMatrix& Calculus::derivative_adjoint(int axis, int level) const {
  if (axis < 1 || axis > dim()) throw DomainError("axis out of range");
  return deriv_adj_.at(level).at(axis - 1);
}

RealForm Calculus::d(const RealForm& u) const {
  const int N = dim();
  const int p = u.degree;
  if (u.dim != N || u.nodes() != grid_->size(p)) throw DegreeMismatch("form does not live on this grid");
  if (p >= N) return {N, p + 1, Eigen::MatrixXd(0, 0)};
  RealForm out = RealForm::zero(*grid_, p + 1);
  for (const auto& e : wedge_table(N, p)) {
    out.coeffs.col(static_cast<Eigen::Index>(e.target)) +=
        e.sign * (derivative(e.axis, p) * u.coeffs.col(static_cast<Eigen::Index>(e.source)));
  }
  return out;
}

RealForm Calculus::t_star_discrete(const RealForm& alpha) const {
  const int N = dim();
  const int q = alpha.degree;
  if (q < 1 || q > N || alpha.nodes() != grid_->size(q)) {
    throw DegreeMismatch("t_star needs a form of degree 1..N on its grid level");
  }
  RealForm out = RealForm::zero(*grid_, q - 1);
  for (const auto& e : wedge_table(N, q - 1)) {
    out.coeffs.col(static_cast<Eigen::Index>(e.source)) +=
        e.sign *
        (derivative_adjoint(e.axis, q - 1) * alpha.coeffs.col(static_cast<Eigen::Index>(e.target)));
  }
  return out;
}

RealForm Calculus::t_star_formula(const RealForm& alpha) const {
  const int N = dim();
  const int q = alpha.degree;
  if (q < 1 || q > N || alpha.nodes() != grid_->size(q)) {
    throw DegreeMismatch("t_star needs a form of degree 1..N on its grid level");
  }
  const int p = q - 1;
  RealForm out = RealForm::zero(*grid_, p);
  const SparseMatrix& E = restriction(p);
  for (const auto& e : wedge_table(N, p)) {
    const auto a = alpha.coeffs.col(static_cast<Eigen::Index>(e.target));
    // -D_j of the zero extension is D_j^T; the zero-order term is phi_j alpha.
    Eigen::VectorXd term = derivative(e.axis, p).transpose() * a;
    term += phi_grad_[p].col(e.axis - 1).cwiseProduct(E.transpose() * a);
    out.coeffs.col(static_cast<Eigen::Index>(e.source)) += e.sign * term;
  }
  return out;
}

Eigen::VectorXd Calculus::delta(int axis, const Eigen::VectorXd& g, int level) const {
  if (g.size() != grid_->size(level)) throw DegreeMismatch("field does not live on this level");
  return derivative(axis, level) * g -
         phi_grad_.at(level + 1).col(axis - 1).cwiseProduct(restriction(level) * g);
}

Eigen::VectorXcd Calculus::dz(int j, const Eigen::VectorXcd& g, int level) const {
  const std::complex<double> I(0.0, 1.0);
  const Eigen::VectorXcd a = derivative(2 * j - 1, level) * g;
  const Eigen::VectorXcd b = derivative(2 * j, level) * g;
  return 0.5 * (a - I * b);
}

Eigen::VectorXcd Calculus::dzbar(int j, const Eigen::VectorXcd& g, int level) const {
  const std::complex<double> I(0.0, 1.0);
  const Eigen::VectorXcd a = derivative(2 * j - 1, level) * g;
  const Eigen::VectorXcd b = derivative(2 * j, level) * g;
  return 0.5 * (a + I * b);
}

ComplexForm Calculus::dbar(const ComplexForm& u) const {
  const int n = u.n;
  const int lvl = u.level();
  if (u.nodes() != grid_->size(lvl)) throw DegreeMismatch("form does not live on this grid");
  if (u.bidegree == Bidegree{0, 0}) {
    ComplexForm out = ComplexForm::zero(*grid_, {0, 1});
    for (int j = 1; j <= n; ++j) out.coeffs.col(j - 1) = dzbar(j, u.coeffs.col(0), lvl);
    return out;
  }
  if (u.bidegree == Bidegree{1, 0}) {
    // dbar(v_i dz_i) = dzbar_j v_i dzbar_j ^ dz_i = -dzbar_j v_i dz_i ^ dzbar_j
    ComplexForm out = ComplexForm::zero(*grid_, {1, 1});
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) out.at11_col(i, j) = -dzbar(j, u.coeffs.col(i - 1), lvl);
    }
    return out;
  }
  if (u.bidegree == Bidegree{0, 1}) {
    ComplexForm out = ComplexForm::zero(*grid_, {0, 2});
    for (int k = 1; k <= n; ++k) {
      for (int j = k + 1; j <= n; ++j) {
        out.coeffs.col(pair_position(k, j, n)) =
            dzbar(k, u.coeffs.col(j - 1), lvl) - dzbar(j, u.coeffs.col(k - 1), lvl);
      }
    }
    return out;
  }
  throw DegreeMismatch("dbar is not implemented for bidegree " + u.bidegree.to_string());
}

ComplexForm Calculus::partial(const ComplexForm& u) const {
  const int n = u.n;
  const int lvl = u.level();
  if (u.nodes() != grid_->size(lvl)) throw DegreeMismatch("form does not live on this grid");
  if (u.bidegree == Bidegree{0, 0}) {
    ComplexForm out = ComplexForm::zero(*grid_, {1, 0});
    for (int j = 1; j <= n; ++j) out.coeffs.col(j - 1) = dz(j, u.coeffs.col(0), lvl);
    return out;
  }
  if (u.bidegree == Bidegree{0, 1}) {
    ComplexForm out = ComplexForm::zero(*grid_, {1, 1});
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) out.at11_col(i, j) = dz(i, u.coeffs.col(j - 1), lvl);
    }
    return out;
  }
  if (u.bidegree == Bidegree{1, 0}) {
    ComplexForm out = ComplexForm::zero(*grid_, {2, 0});
    for (int k = 1; k <= n; ++k) {
      for (int i = k + 1; i <= n; ++i) {
        out.coeffs.col(pair_position(k, i, n)) =
            dz(k, u.coeffs.col(i - 1), lvl) - dz(i, u.coeffs.col(k - 1), lvl);
      }
    }
    return out;
  }
  throw DegreeMismatch("partial is not implemented for bidegree " + u.bidegree.to_string());
}

ComplexForm Calculus::dbar_adjoint(const ComplexForm& g) const {
  if (!(g.bidegree == Bidegree{0, 1}) || g.nodes() != grid_->size(1)) {
    throw DegreeMismatch("dbar adjoint needs a (0,1) form on level 1");
  }
  const std::complex<double> I(0.0, 1.0);
  ComplexForm out = ComplexForm::zero(*grid_, {0, 0});
  for (int j = 1; j <= g.n; ++j) {
    const Eigen::VectorXcd a = derivative_adjoint(2 * j - 1, 0) * g.coeffs.col(j - 1);
    const Eigen::VectorXcd b = derivative_adjoint(2 * j, 0) * g.coeffs.col(j - 1);
    out.coeffs.col(0) += 0.5 * (a - I * b);
  }
  return out;
}

LinearMap<double> Calculus::d_map(int degree) const {
  const int N = dim();
  if (degree < 0 || degree >= N) throw DegreeMismatch("d_map needs 0 <= p < N");
  LinearMap<double> A;
  const Eigen::Index ns = grid_->size(degree), nt = grid_->size(degree + 1);
  A.source_weights = tiled_weights(degree, static_cast<Eigen::Index>(binomial(N, degree)));
  A.target_weights = tiled_weights(degree + 1, static_cast<Eigen::Index>(binomial(N, degree + 1)));
  A.apply = [this, N, degree, ns](const Eigen::VectorXd& x) {
    return d(RealForm::from_flat(N, degree, ns, x)).flat();
  };
  A.adjoint = [this, N, degree, nt](const Eigen::VectorXd& y) {
    return t_star_discrete(RealForm::from_flat(N, degree + 1, nt, y)).flat();
  };
  return A;
}

LinearMap<std::complex<double>> Calculus::dbar_map() const {
  if (dim() % 2 != 0) throw std::invalid_argument("dbar needs an even real dimension");
  const int n = dim() / 2;
  LinearMap<std::complex<double>> A;
  const Eigen::Index ns = grid_->size(0), nt = grid_->size(1);
  A.source_weights = weights(0);
  A.target_weights = tiled_weights(1, n);
  A.apply = [this, n, ns](const Eigen::VectorXcd& x) {
    return dbar(ComplexForm::from_flat(n, {0, 0}, ns, x)).flat();
  };
  A.adjoint = [this, n, nt](const Eigen::VectorXcd& y) {
    return dbar_adjoint(ComplexForm::from_flat(n, {0, 1}, nt, y)).flat();
  };
  return A;
}

}  // namespace pellel
