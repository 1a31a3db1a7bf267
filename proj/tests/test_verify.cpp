#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pellel/verify.hpp"

using namespace pellel;

namespace {

Polynomial x(int j, int dim = 2) { return Polynomial::coordinate(dim, j); }
Polynomial cst(double c, int dim = 2) { return Polynomial::constant(dim, c); }

PolyForm one_form(Polynomial a1, Polynomial a2) {
  PolyForm a(2, 1);
  a.component(0) = std::move(a1);
  a.component(1) = std::move(a2);
  return a;
}

Eigen::MatrixXd random_points(int count, int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd p(count, dim);
  for (auto& v : p.reshaped()) v = u(rng);
  return p;
}

const Domain disk = Domain::ball(2, 1.0);
const Weight gauss = Weight::norm_squared(2);

}  // namespace

TEST_CASE("polynomial algebra") {
  const Polynomial p = x(1) * x(1) * x(2) + cst(3.0);
  CHECK(p.total_degree() == 3);
  CHECK(p(Eigen::Vector2d(2.0, -1.0)) == doctest::Approx(-1.0));
  CHECK(p.derivative(1)(Eigen::Vector2d(2.0, -1.0)) == doctest::Approx(-4.0));
  CHECK(p.derivative(2).derivative(2).is_zero());
  CHECK((p - p).is_zero());

  // d of a random form is closed.
  std::mt19937_64 rng(2);
  const PolyForm a = random_poly_form(4, 1, 3, rng);
  const PolyForm dda = a.d().d();
  const Eigen::MatrixXd pts = random_points(20, 4, rng);
  for (Eigen::Index k = 0; k < pts.rows(); ++k) {
    CHECK(dda.evaluate(pts.row(k).transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("pointwise |d alpha|^2 identity") {
  const Eigen::MatrixXd pts = Eigen::Matrix<double, 3, 2>{{0.1, 0.2}, {-0.5, 0.3}, {0.7, -0.9}};
  // alpha = x2 dx1: |d alpha|^2 = 1, gradient term 1, cross term 0.
  const IdentityCheck a = check_dalpha_identity(one_form(x(2), cst(0)), pts);
  CHECK(a.max_deviation <= 1e-15);
  CHECK(a.scale == doctest::Approx(1.0));
  // alpha = x2 dx1 + x1 dx2: closed, 2 - 2.
  const IdentityCheck b = check_dalpha_identity(one_form(x(2), x(1)), pts);
  CHECK(b.max_deviation <= 1e-15);
  CHECK(b.scale <= 1e-15);

  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const PolyForm w = random_poly_form(4, 2, 3, rng);
    CHECK(check_dalpha_identity(w, random_points(100, 4, rng)).relative() <= 1e-12);
  }
}

TEST_CASE("boundary identity") {
  const BoundaryQuadrature q = boundary_quadrature(disk, 1024);
  const PolyForm t = tangential_1form(disk, cst(1.0));
  // t = -x2 dx1 + x1 dx2.
  CHECK(t.components()[0](Eigen::Vector2d(0.3, 0.5)) == doctest::Approx(-0.5));
  CHECK(t.components()[1](Eigen::Vector2d(0.3, 0.5)) == doctest::Approx(0.3));
  const IdentityCheck r = check_boundary_identity(t, disk, q);
  CHECK(r.max_deviation <= 1e-12);
  CHECK(r.scale == doctest::Approx(2.0));  // both sides equal -2 on the circle

  CHECK(check_boundary_identity(tangential_1form(disk, x(1)), disk, q).relative() <= 1e-8);

  const Domain ell = Domain::ellipsoid(Eigen::Vector2d(1.0, 0.5));
  const BoundaryQuadrature qe = boundary_quadrature(ell, 1024);
  CHECK(check_boundary_identity(tangential_1form(ell, x(1) * x(2) + cst(1)), ell, qe).relative() <= 1e-8);

  CHECK_THROWS_AS(check_boundary_identity(one_form(cst(1), cst(0)), disk, q), PreconditionError);
  try {
    check_boundary_identity(one_form(cst(1), cst(0)), disk, q);
  } catch (const PreconditionError& e) {
    CHECK(e.violation() > 0.1);
  }
}

TEST_CASE("Bochner identity on the disk") {
  const BoundaryQuadrature q = boundary_quadrature(disk, 1024);
  const PolyForm t = tangential_1form(disk, cst(1.0));

  const BochnerTerms zero = check_bochner_identity(PolyForm(2, 1), gauss, disk, 1.0 / 16, q);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);

  const BochnerTerms a = check_bochner_identity(t, gauss, disk, 1.0 / 64, q);
  const BochnerTerms b = check_bochner_identity(t, gauss, disk, 1.0 / 128, q);
  CHECK(a.deviation <= 0.02);
  CHECK(a.deviation / b.deviation >= 1.5);
  // Polar closed form: T* t = 0, dt = 2 dx1^dx2, so lhs = 4 pi (1 - 1/e).
  const double exact = 4 * std::numbers::pi * (1 - std::exp(-1.0));
  CHECK(std::abs(a.tstar2) <= 1e-10);
  CHECK(a.lhs == doctest::Approx(exact).epsilon(1e-4));
  CHECK(b.lhs == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("basic estimate") {
  const BoundaryQuadrature q = boundary_quadrature(disk, 1024);
  const BasicEstimate z = check_basic_estimate(PolyForm(2, 1), gauss, disk, 1.0 / 32, q);
  CHECK(z.margin == 0.0);

  const PolyForm t = tangential_1form(disk, cst(1.0));
  const BasicEstimate e = check_basic_estimate(t, gauss, disk, 1.0 / 64, q);
  CHECK(e.c == doctest::Approx(2.0));
  CHECK(e.relative_margin >= -0.02);

  PolyForm t10 = t;
  t10 *= 10.0;
  const BasicEstimate e10 = check_basic_estimate(t10, gauss, disk, 1.0 / 64, q);
  CHECK(e10.margin == doctest::Approx(100 * e.margin).epsilon(1e-12));
}
