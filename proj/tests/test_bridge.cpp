#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pellel/bridge.hpp"

using namespace pellel;
using C = std::complex<double>;

namespace {

const C I(0.0, 1.0);

const Grid& grid(int N) {
  static const Grid g2 = Grid::build(Domain::ball(2, 1.0), 0.25);
  static const Grid g4 = Grid::build(Domain::ball(4, 1.0), 0.3);
  return N == 2 ? g2 : g4;
}

/// The same (1,1) coefficient matrix F(i, j) = f_{i jbar} at every node.
ComplexForm constant11(const Eigen::MatrixXcd& F) {
  const int n = static_cast<int>(F.rows());
  return ComplexForm::sample(grid(2 * n), {1, 1}, [&](const Eigen::VectorXd&) {
    Eigen::VectorXcd v(n * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) v[i * n + j] = F(i, j);
    }
    return v;
  });
}

Eigen::MatrixXcd random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd F(n, n);
  for (auto& v : F.reshaped()) v = C(nd(rng), nd(rng));
  return F;
}

}  // namespace

TEST_CASE("real (1,1) forms to real 2-forms") {
  Eigen::MatrixXcd F(1, 1);
  F(0, 0) = I;
  const RealForm g = real11_to_real2(constant11(F));
  CHECK((g.coeffs.array() - 2.0).abs().maxCoeff() <= 1e-15);

  CHECK(real11_to_real2(constant11(Eigen::MatrixXcd::Zero(1, 1))).coeffs.isZero());

  // A_{1 2bar} = 1 = -A_{2 1bar}: dx-block and dy-block, (1,3) and (2,4) in interleaved order.
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(2, 2);
  G(0, 1) = 1.0;
  G(1, 0) = -1.0;
  const RealForm g2 = real11_to_real2(constant11(G));
  Eigen::VectorXd expect(6);
  expect << 0, 2, 0, 0, 2, 0;
  CHECK((g2.coeffs.row(0).transpose() - expect).cwiseAbs().maxCoeff() <= 1e-15);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXcd R = random_matrix(2, rng);
    const Eigen::MatrixXcd Fr = 0.5 * (R - R.adjoint());  // f_{i jbar} = -conj f_{j ibar}
    const RealForm out = real11_to_real2(constant11(Fr));
    const Eigen::VectorXcd ref = oracle::expand_11(Fr);
    CHECK(ref.imag().cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((out.coeffs.row(0).transpose() - ref.real()).cwiseAbs().maxCoeff() <= 1e-14);
    // Round trip.
    const ComplexForm back = real2_to_real11(out);
    CHECK((back.coeffs - constant11(Fr).coeffs).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("non-real inputs") {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXcd F = random_matrix(2, rng);
  const ComplexForm f = constant11(F);
  CHECK(realness_defect(f) > 0.1);
  CHECK_THROWS_AS(real11_to_real2(f), ValidationError);
  try {
    real11_to_real2(f);
  } catch (const ValidationError& e) {
    CHECK(e.defect() == doctest::Approx(realness_defect(f)));
  }
  const auto [f1, f2] = split_nonreal(f);
  CHECK(realness_defect(f1) <= 1e-15);
  CHECK(realness_defect(f2) <= 1e-15);
  CHECK((f1.coeffs + I * f2.coeffs - f.coeffs).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((real11_to_real2(f, false).coeffs - real11_to_real2(f1).coeffs).cwiseAbs().maxCoeff() == 0.0);

  // Generic expansion of the complex-valued form.
  const Eigen::MatrixXcd coords = complex2_to_real_coords(f);
  CHECK((coords.row(0).transpose() - oracle::expand_11(F)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("real 2-forms to (1,1) forms") {
  const RealForm g = RealForm::sample(grid(2), 2, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Constant(1, 2.0); });
  const ComplexForm f = real2_to_real11(g);
  CHECK((f.coeffs.array() - I).abs().maxCoeff() <= 1e-15);

  // dx-block without the matching dy-block is outside the image.
  const RealForm bad = RealForm::sample(grid(4), 2, [](const Eigen::VectorXd&) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(6);
    v[1] = 1.0;
    return v;
  });
  CHECK_THROWS_AS(real2_to_real11(bad), ValidationError);
}

TEST_CASE("1-form splitting") {
  const auto one = [](int axis) {
    return RealForm::sample(grid(2), 1, [axis](const Eigen::VectorXd&) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(2);
      v[axis] = 1.0;
      return v;
    });
  };
  auto [a10, a01] = split_1form(one(0));
  CHECK((a10.coeffs.array() - 0.5).abs().maxCoeff() <= 1e-16);
  CHECK((a01.coeffs.array() - 0.5).abs().maxCoeff() <= 1e-16);
  auto [b10, b01] = split_1form(one(1));
  CHECK((b10.coeffs.array() + 0.5 * I).abs().maxCoeff() <= 1e-16);
  CHECK((b01.coeffs.array() - 0.5 * I).abs().maxCoeff() <= 1e-16);
  auto [z10, z01] = split_1form(RealForm::zero(grid(2), 1));
  CHECK(z10.coeffs.isZero());
  CHECK(z01.coeffs.isZero());

  const RealForm v = RealForm::sample(grid(4), 1, [](const Eigen::VectorXd& x) {
    return Eigen::Vector4d(x[0], -x[3], 1.0, x[1] * x[2]).eval();
  });
  const auto [v10, v01] = split_1form(v);
  const Eigen::MatrixXcd back = reassemble_1form(v10, v01);
  CHECK((back - v.coeffs.cast<C>()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("Hessian splitting identity") {
  const Eigen::Vector2d x(0.1, -0.3);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 5; ++t) {
    const Eigen::Vector2d xi(nd(rng), nd(rng));
    const auto s = hessian_split_identity(Weight::norm_squared(2), x, xi);
    CHECK(s.lhs == doctest::Approx(2 * xi.squaredNorm()));
    CHECK(s.rhs == doctest::Approx(2 * xi.squaredNorm()));

    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    A(0, 0) = 1.0;  // phi = x1^2
    const auto q = hessian_split_identity(Weight::quadratic(A), x, xi);
    CHECK(q.lhs == doctest::Approx(2 * xi[0] * xi[0]));
    CHECK(q.rhs == doctest::Approx(2 * xi[0] * xi[0]));
  }
  // phi = ((z + zbar)/2)^2: phi_zz = phi_{z zbar} = phi_{zbar zbar} = 1/2.
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  A(0, 0) = 1.0;
  const HessianSplit hs = hessian_split(Weight::quadratic(A).hessian(x));
  CHECK(std::abs(hs.holomorphic(0, 0) - 0.5) <= 1e-15);
  CHECK(std::abs(hs.mixed(0, 0) - 0.5) <= 1e-15);
  CHECK(std::abs(hs.anti(0, 0) - 0.5) <= 1e-15);

  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd B(4, 4);
    for (auto& v : B.reshaped()) v = nd(rng);
    const Weight w = Weight::quadratic(B);
    Eigen::VectorXd xi(4), y(4);
    for (int k = 0; k < 4; ++k) {
      xi[k] = nd(rng);
      y[k] = nd(rng);
    }
    const auto s = hessian_split_identity(w, y, xi);
    CHECK(std::abs(s.lhs - s.rhs) <= 1e-12 * std::max(1.0, std::abs(s.lhs)));
  }
}

TEST_CASE("Levi form lower bound") {
  const Eigen::Vector2d x(0.2, 0.1);
  const Eigen::VectorXcd w = Eigen::VectorXcd::Constant(1, C(0.6, -0.8));
  auto s = levi_lower_bound(Weight::norm_squared(2), 2.0, x, w);
  CHECK(s.lhs == doctest::Approx(1.0));
  CHECK(s.rhs == doctest::Approx(1.0));
  s = levi_lower_bound(Weight::quadratic(2 * Eigen::Matrix2d::Identity()), 4.0, x, w);
  CHECK(s.lhs == doctest::Approx(2.0));
  CHECK(s.lhs >= s.rhs - 1e-14);

  Eigen::Vector4d diag(2, 2, 4, 4);  // phi = sum a_k x_k^2 interleaved, c = 4
  const Weight q = Weight::quadratic(Eigen::Matrix4d(diag.asDiagonal()));
  std::mt19937_64 rng(12);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXcd om(2);
    om << C(nd(rng), nd(rng)), C(nd(rng), nd(rng));
    const auto r = levi_lower_bound(q, 4.0, Eigen::Vector4d::Zero(), om);
    CHECK(r.lhs >= r.rhs - 1e-12 * r.lhs);
  }
}

TEST_CASE("coordinate conventions") {
  CHECK(split_to_interleaved(2) == std::vector<int>{1, 3, 2, 4});
  const Eigen::VectorXcd om = omega_from_xi(Eigen::Vector4d(1, 2, 3, 4));
  CHECK(om[0] == C(1, 2));
  CHECK(om[1] == C(3, 4));
  Eigen::Matrix4d S = Eigen::Vector4d(1, 2, 3, 4).asDiagonal();  // (x1, x2, y1, y2)
  const Eigen::MatrixXd T = split_to_interleaved(S);
  CHECK(T.diagonal() == Eigen::Vector4d(1, 3, 2, 4));
}
