#include "pellel/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace pellel {

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

BoundaryQuadrature boundary_quadrature(const Domain& domain, int m) {
  if (m < 1) throw std::invalid_argument("boundary quadrature needs m >= 1");
  const int n = domain.dim();
  const Eigen::VectorXd& a = domain.semi_axes();
  const Eigen::VectorXd& c = domain.center();
  BoundaryQuadrature q;
  if (n == 2) {
    q.points.resize(m, 2);
    q.ds_weights.resize(m);
    const double dt = 2.0 * std::numbers::pi / m;
    for (int k = 0; k < m; ++k) {
      const double t = k * dt;
      q.points(k, 0) = c[0] + a[0] * std::cos(t);
      q.points(k, 1) = c[1] + a[1] * std::sin(t);
      q.ds_weights[k] = std::hypot(a[0] * std::sin(t), a[1] * std::cos(t)) * dt;
    }
  } else if (n == 3) {
    // u = cos(theta) on Gauss-Legendre nodes, trapezoid in the azimuth.
    const int nu = std::max(1, static_cast<int>(std::lround(std::sqrt(m / 2.0))));
    const int nphi = std::max(1, m / nu);
    const auto [u, wu] = gauss_legendre(nu);
    q.points.resize(nu * nphi, 3);
    q.ds_weights.resize(nu * nphi);
    const double dphi = 2.0 * std::numbers::pi / nphi;
    int k = 0;
    for (int i = 0; i < nu; ++i) {
      const double s = std::sqrt(std::max(0.0, 1.0 - u[i] * u[i]));
      for (int l = 0; l < nphi; ++l, ++k) {
        const double phi = l * dphi;
        const double cp = std::cos(phi), sp = std::sin(phi);
        q.points(k, 0) = c[0] + a[0] * s * cp;
        q.points(k, 1) = c[1] + a[1] * s * sp;
        q.points(k, 2) = c[2] + a[2] * u[i];
        const double e = std::sqrt(std::pow(a[1] * a[2] * s * cp, 2) +
                                   std::pow(a[0] * a[2] * s * sp, 2) +
                                   std::pow(a[0] * a[1] * u[i], 2));
        q.ds_weights[k] = e * wu[i] * dphi;
      }
    }
  } else {
    throw UnsupportedDomainError("boundary quadrature supports N = 2 or 3, got N = " +
                                 std::to_string(n));
  }
  q.grad_norm.resize(q.points.rows());
  for (Eigen::Index k = 0; k < q.points.rows(); ++k) {
    q.grad_norm[k] = domain.rho_gradient(q.points.row(k).transpose()).norm();
  }
  return q;
}

namespace {

// Area of [x0,x1] x [y0,y1] inside the ellipse with centre c and axes a.
double cell_area_in_ellipse(double x0, double x1, double y0, double y1,
                            const Eigen::VectorXd& a, const Eigen::VectorXd& c,
                            const Eigen::VectorXd& gl_x, const Eigen::VectorXd& gl_w) {
  const double lo = std::max(x0, c[0] - a[0]);
  const double hi = std::min(x1, c[0] + a[0]);
  if (lo >= hi) return 0.0;
  std::vector<double> br{lo, hi};
  for (double t : {y0 - c[1], y1 - c[1]}) {
    if (std::abs(t) < a[1]) {
      const double s = a[0] * std::sqrt(1.0 - (t / a[1]) * (t / a[1]));
      for (double xb : {c[0] - s, c[0] + s}) {
        if (xb > lo && xb < hi) br.push_back(xb);
      }
    }
  }
  std::sort(br.begin(), br.end());
  const auto length = [&](double x) {
    const double r = (x - c[0]) / a[0];
    const double Y = a[1] * std::sqrt(std::max(0.0, 1.0 - r * r));
    return std::max(0.0, std::min(y1, c[1] + Y) - std::max(y0, c[1] - Y));
  };
  double area = 0.0;
  for (std::size_t p = 0; p + 1 < br.size(); ++p) {
    const double xl = br[p], xr = br[p + 1];
    if (xr <= xl) continue;
    // x = xl + (xr - xl)(1 - cos(pi s))/2 smooths square-root endpoints.
    for (Eigen::Index g = 0; g < gl_x.size(); ++g) {
      const double s = 0.5 * (gl_x[g] + 1.0);
      const double x = xl + (xr - xl) * 0.5 * (1.0 - std::cos(std::numbers::pi * s));
      const double jac = (xr - xl) * 0.5 * std::numbers::pi * std::sin(std::numbers::pi * s);
      area += 0.5 * gl_w[g] * jac * length(x);
    }
  }
  return area;
}

}  // namespace

InteriorQuadrature interior_quadrature(const Domain& domain, double h) {
  if (!(h > 0)) throw std::invalid_argument("quadrature spacing must be positive");
  InteriorQuadrature q;
  if (domain.dim() != 2) {
    const Grid g = Grid::build(domain, h);
    q.points = g.coords(0);
    q.weights = Eigen::VectorXd::Constant(g.size(0), g.cell_volume());
    return q;
  }
  const Eigen::VectorXd& a = domain.semi_axes();
  const Eigen::VectorXd& c = domain.center();
  const auto [glx, glw] = gauss_legendre(24);
  const auto K0 = static_cast<long>(std::ceil(a[0] / h)) + 1;
  const auto K1 = static_cast<long>(std::ceil(a[1] / h)) + 1;
  std::vector<double> px, py, pw;
  for (long j = -K1; j < K1; ++j) {
    for (long i = -K0; i < K0; ++i) {
      const double x0 = c[0] + i * h, x1 = x0 + h;
      const double y0 = c[1] + j * h, y1 = y0 + h;
      bool inside = true;
      for (double x : {x0, x1}) {
        for (double y : {y0, y1}) {
          if (domain.rho(Eigen::Vector2d(x, y)) >= 0) inside = false;
        }
      }
      const double w = inside ? h * h : cell_area_in_ellipse(x0, x1, y0, y1, a, c, glx, glw);
      if (w > 0) {
        px.push_back(x0 + 0.5 * h);
        py.push_back(y0 + 0.5 * h);
        pw.push_back(w);
      }
    }
  }
  const auto m = static_cast<Eigen::Index>(pw.size());
  q.points.resize(m, 2);
  q.weights.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    q.points(k, 0) = px[k];
    q.points(k, 1) = py[k];
    q.weights[k] = pw[k];
  }
  return q;
}

}  // namespace pellel
