// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pellel/calculus.hpp"
#include "pellel/pipeline.hpp"
#include "pellel/verify.hpp"

using namespace pellel;
using C = std::complex<double>;

namespace {

const C I(0.0, 1.0);

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

int failures = 0;

void criterion(const std::string& name, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.require(secs <= time_limit, "time " + sci(secs) + " s <= " + sci(time_limit) + " s");
  if (!out.pass) ++failures;
  std::printf("%s  %-22s %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.str().c_str());
  std::fflush(stdout);
}

RealForm random_form(const Grid& g, int p, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  RealForm f = RealForm::zero(g, p);
  for (Eigen::Index k = 0; k < f.coeffs.size(); ++k) f.coeffs.data()[k] = nd(rng);
  return f;
}

ComplexForm i_dz_dzbar(const Grid& g, int n) {
  return ComplexForm::sample(g, {1, 1}, [n](const Eigen::VectorXd&) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n * n);
    v[0] = I;
    return v;
  });
}

struct Case {
  std::string name;
  Domain domain;
  double h;
};

std::vector<Case> exactness_cases() {
  return {{"disk", Domain::ball(2, 1.0), 1.0 / 32},
          {"ellipse", Domain::ellipsoid(Eigen::Vector2d(1.0, 2.0)), 1.0 / 16},
          {"4-ball", Domain::ball(4, 1.0), 1.0 / 8}};
}

std::vector<std::pair<std::string, PolyForm>> tangential_forms(const Domain& d, std::mt19937_64& rng) {
  const Polynomial one = Polynomial::constant(2, 1.0);
  const Polynomial x1 = Polynomial::coordinate(2, 1), x2 = Polynomial::coordinate(2, 2);
  return {{"1", tangential_1form(d, one)},
          {"x1", tangential_1form(d, x1)},
          {"x1*x2", tangential_1form(d, x1 * x2)},
          {"1+x2^2", tangential_1form(d, one + x2 * x2)},
          {"random", tangential_1form(d, random_polynomial(2, 3, rng))}};
}

}  // namespace

int main() {
  std::mt19937_64 rng(20240607);

  criterion("exactness", 10.0, [&](Outcome& out) {
    double worst = 0.0;
    int checked = 0;
    for (const auto& c : exactness_cases()) {
      const Calculus calc(build_grid(c.domain, c.h), Weight::norm_squared(c.domain.dim()));
      for (int p = 0; p + 2 <= c.domain.dim(); ++p) {
        const RealForm u = random_form(calc.grid(), p, rng);
        const RealForm dd = calc.d(calc.d(u));
        if (dd.nodes() == 0) continue;
        worst = std::max(worst, dd.coeffs.cwiseAbs().maxCoeff() / u.coeffs.cwiseAbs().maxCoeff());
        ++checked;
      }
    }
    out.require(checked == 5, std::to_string(checked) + " (grid, p) pairs");
    out.require(worst <= 1e-12, "max |ddu|/|u| " + sci(worst) + " <= 1e-12");
  });

  criterion("adjointness", 10.0, [&](Outcome& out) {
    double worst = 0.0;
    for (const auto& c : exactness_cases()) {
      const Calculus calc(build_grid(c.domain, c.h), Weight::norm_squared(c.domain.dim()));
      for (int p = 0; p < c.domain.dim(); ++p) {
        if (calc.grid().size(p + 1) == 0) continue;
        worst = std::max(worst, adjointness_defect(calc.d_map(p), 100, rng()));
      }
    }
    out.require(worst <= 1e-12, "100 probes per map, max defect " + sci(worst) + " <= 1e-12");
  });

  criterion("adjoint consistency", 60.0, [&](Outcome& out) {
    const auto bump = [](const Eigen::VectorXd& x) {
      const double s = 1 - 16 * x.squaredNorm();
      return Eigen::Vector2d(s > 0 ? std::pow(s, 4) : 0.0, s > 0 ? x[0] * std::pow(s, 4) : 0.0).eval();
    };
    std::vector<double> err;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      const Calculus calc(build_grid(Domain::ball(2, 1.0), h), Weight::norm_squared(2));
      const RealForm a = RealForm::sample(calc.grid(), 1, bump);
      RealForm diff = calc.t_star_discrete(a);
      diff.coeffs -= calc.t_star_formula(a).coeffs;
      err.push_back(std::sqrt(weighted_inner(diff, diff, calc.weight(), calc.grid())));
    }
    const double order = std::min(std::log2(err[0] / err[1]), std::log2(err[1] / err[2]));
    out.require(order >= 1.8, "errors " + sci(err[0]) + ", " + sci(err[1]) + ", " + sci(err[2]) +
                                  "; order " + sci(order) + " >= 1.8");
  });

  criterion("dalpha identity", 5.0, [&](Outcome& out) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int N = k % 2 == 0 ? 2 : 4;
      const int degree = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(N));
      const PolyForm a = random_poly_form(N, degree, 3, rng);
      Eigen::MatrixXd pts(20, N);
      for (auto& v : pts.reshaped()) v = u(rng);
      worst = std::max(worst, check_dalpha_identity(a, pts).relative());
    }
    out.require(worst <= 1e-12, "100 forms, max deviation " + sci(worst) + " <= 1e-12");
  });

  const Domain disk = Domain::ball(2, 1.0);
  const Weight gauss2 = Weight::norm_squared(2);
  const BoundaryQuadrature circle = boundary_quadrature(disk, 1024);

  criterion("boundary identity", 10.0, [&](Outcome& out) {
    double worst = 0.0;
    for (const auto& [name, a] : tangential_forms(disk, rng)) {
      worst = std::max(worst, check_boundary_identity(a, disk, circle).relative());
    }
    out.require(worst <= 1e-8, "5 forms, 1024 nodes, max deviation " + sci(worst) + " <= 1e-8");
  });

  criterion("Bochner identity", 60.0, [&](Outcome& out) {
    double worst = 0.0, gain = std::numeric_limits<double>::infinity();
    for (const auto& [name, a] : tangential_forms(disk, rng)) {
      const BochnerTerms c = check_bochner_identity(a, gauss2, disk, 1.0 / 64, circle);
      const BochnerTerms f = check_bochner_identity(a, gauss2, disk, 1.0 / 128, circle);
      worst = std::max(worst, c.deviation);
      gain = std::min(gain, c.deviation / f.deviation);
    }
    out.require(worst <= 0.02, "deviation at 128^2 " + sci(worst) + " <= 0.02");
    out.require(gain >= 1.5, "improvement at 256^2 " + sci(gain) + " >= 1.5");
  });

  criterion("basic estimate", 30.0, [&](Outcome& out) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [name, a] : tangential_forms(disk, rng)) {
      for (double scale : {1.0, 10.0}) {
        PolyForm s = a;
        s *= scale;
        worst = std::min(worst, check_basic_estimate(s, gauss2, disk, 1.0 / 64, circle).relative_margin);
      }
    }
    out.require(worst >= -0.02, "min relative margin " + sci(worst) + " >= -0.02");
  });

  criterion("Poincare constant", 120.0, [&](Outcome& out) {
    std::vector<double> ratios;
    for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
      const Calculus calc(build_grid(disk, h), gauss2);
      const RealForm f = RealForm::sample(calc.grid(), 2, [](const Eigen::VectorXd&) { return Eigen::VectorXd::Ones(1); });
      const PoincareResult r = solve_poincare(f, calc);
      ratios.push_back(r.report.ratio);
      if (h == 1.0 / 64) {
        out.require(r.report.ratio <= 0.25 * 1.15, "ratio " + sci(r.report.ratio) + " <= 0.2875");
        out.require(r.report.relative_residual <= 1e-6,
                    "residual " + sci(r.report.relative_residual) + " <= 1e-6");
      }
    }
    const bool monotone = ratios[1] <= ratios[0] && ratios[2] <= ratios[1];
    out.require(monotone, "non-increasing under refinement: " + sci(ratios[0]) + ", " + sci(ratios[1]) + ", " +
                              sci(ratios[2]));
  });

  criterion("Hormander constant", 60.0, [&](Outcome& out) {
    const Calculus calc(build_grid(disk, 1.0 / 64), gauss2);
    const ComplexForm g = ComplexForm::sample(calc.grid(), {0, 1}, [](const Eigen::VectorXd&) {
      return Eigen::VectorXcd::Ones(1);
    });
    const DbarResult r = solve_dbar(g, calc);
    out.require(std::abs(r.c_levi - 1.0) <= 1e-12, "c_levi " + sci(r.c_levi));
    out.require(r.report.ratio <= 2 * 1.15, "ratio " + sci(r.report.ratio) + " <= 2.3");
    out.require(r.report.relative_residual <= 1e-6,
                "residual " + sci(r.report.relative_residual) + " <= 1e-6");
  });

  criterion("main theorem", 300.0, [&](Outcome& out) {
    const Calculus calc(build_grid(disk, 1.0 / 64), gauss2);
    const PipelineResult r = solve_poincare_lelong(i_dz_dzbar(calc.grid(), 1), calc);
    const PipelineReport& p = r.report;
    out.require(p.ratio_main <= 2 * 1.15, "ratio " + sci(p.ratio_main) + " <= 2.3");
    out.require(p.residual <= 1e-5, "residual " + sci(p.residual) + " <= 1e-5");
    out.require(p.imag_u <= 1e-12, "imag " + sci(p.imag_u) + " <= 1e-12");
  });

  criterion("C^2 smoke", 600.0, [&](Outcome& out) {
    const Calculus calc(build_grid(Domain::ball(4, 1.0), 1.0 / 12), Weight::norm_squared(4));
    const PipelineResult r = solve_poincare_lelong(i_dz_dzbar(calc.grid(), 2), calc);
    const PipelineReport& p = r.report;
    out.require(p.residual <= 1e-3, "residual " + sci(p.residual) + " <= 1e-3");
    out.require(p.ratio_main <= 2 * 1.5, "ratio " + sci(p.ratio_main) + " <= 3");
  });

  criterion("corollary", 300.0, [&](Outcome& out) {
    const GridPtr g = build_grid(disk, 1.0 / 64);
    const CorollaryResult r = corollary_check(disk, i_dz_dzbar(*g, 1), g);
    const double bound = 2 * std::numbers::e * 1.15;
    out.require(std::abs(r.c_omega - 2 * std::numbers::e) <= 1e-12, "c_omega " + sci(r.c_omega));
    out.require(r.ratio <= bound, "unweighted ratio " + sci(r.ratio) + " <= " + sci(bound));
  });

  criterion("non-real linearity", 300.0, [&](Outcome& out) {
    const Calculus calc(build_grid(disk, 1.0 / 64), gauss2);
    const Grid& g = calc.grid();
    const ComplexForm f1 = i_dz_dzbar(g, 1);
    const ComplexForm f2 = ComplexForm::sample(g, {1, 1}, [](const Eigen::VectorXd& x) {
      return Eigen::VectorXcd::Constant(1, I * 4.0 * x.squaredNorm());
    });
    ComplexForm f = f1;
    f.coeffs += I * f2.coeffs;
    const PipelineResult u = solve_poincare_lelong(f, calc);
    const PipelineResult u1 = solve_poincare_lelong(f1, calc);
    const PipelineResult u2 = solve_poincare_lelong(f2, calc);
    const Eigen::VectorXcd combo = u1.u.coeffs.col(0) + I * u2.u.coeffs.col(0);
    const double dev = (u.u.coeffs.col(0) - combo).cwiseAbs().maxCoeff() / combo.cwiseAbs().maxCoeff();
    out.require(dev <= 1e-9, "max |u - u1 - i u2| / max |u| " + sci(dev) + " <= 1e-9");
    out.require(u.report.residual <= 1e-5, "residual " + sci(u.report.residual) + " <= 1e-5");

    ComplexForm s = f1;
    s.coeffs *= -3.0;
    const PipelineResult us = solve_poincare_lelong(s, calc);
    const double lin = (us.u.coeffs + 3.0 * u1.u.coeffs).cwiseAbs().maxCoeff() /
                       (3.0 * u1.u.coeffs.cwiseAbs().maxCoeff());
    out.require(lin <= 1e-6, "real scaling " + sci(lin) + " <= 1e-6");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
