#include "pellel/bridge.hpp"

#include <cmath>
#include <string>

#include "pellel/multiindex.hpp"

namespace pellel {

namespace {

const std::complex<double> I(0.0, 1.0);

void require_11(const ComplexForm& f) {
  if (!(f.bidegree == Bidegree{1, 1})) {
    throw DegreeMismatch("expected a (1,1) form, got " + f.bidegree.to_string());
  }
}

Eigen::Index pos(int a, int b, int N) {
  return static_cast<Eigen::Index>(MultiIndex({a, b}, N).position());
}

}  // namespace

double realness_defect(const ComplexForm& f) {
  require_11(f);
  double worst = 0.0;
  for (int i = 1; i <= f.n; ++i) {
    for (int j = i; j <= f.n; ++j) {
      if (f.nodes() == 0) continue;
      worst = std::max(worst, (f.at11_col(i, j) + f.at11_col(j, i).conjugate()).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

std::pair<ComplexForm, ComplexForm> split_nonreal(const ComplexForm& f) {
  require_11(f);
  ComplexForm f1 = f, f2 = f;
  for (int i = 1; i <= f.n; ++i) {
    for (int j = 1; j <= f.n; ++j) {
      f1.at11_col(i, j) = 0.5 * (f.at11_col(i, j) - f.at11_col(j, i).conjugate());
      f2.at11_col(i, j) = (f.at11_col(i, j) + f.at11_col(j, i).conjugate()) / (2.0 * I);
    }
  }
  return {std::move(f1), std::move(f2)};
}

RealForm real11_to_real2(const ComplexForm& f, bool require_real) {
  require_11(f);
  if (!require_real) return real11_to_real2(split_nonreal(f).first, true);
  const double scale = f.nodes() > 0 && f.coeffs.size() > 0 ? f.coeffs.cwiseAbs().maxCoeff() : 0.0;
  const double defect = realness_defect(f);
  if (defect > 1e-10 * scale) {
    throw ValidationError("(1,1) form is not real: max |f_ij + conj f_ji| = " +
                              std::to_string(defect),
                          defect);
  }
  const int n = f.n;
  const int N = 2 * n;
  RealForm g{N, 2, Eigen::MatrixXd::Zero(f.nodes(), static_cast<Eigen::Index>(binomial(N, 2)))};
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      const Eigen::VectorXd A = f.at11_col(i, j).real();
      const Eigen::VectorXd B = f.at11_col(i, j).imag();
      if (i < j) {
        g.coeffs.col(pos(2 * i - 1, 2 * j - 1, N)) = 2.0 * A;
        g.coeffs.col(pos(2 * i, 2 * j, N)) = 2.0 * A;
      }
      // dx_i ^ dy_j = (2i-1, 2j); reversed order when 2j < 2i-1.
      if (i <= j) {
        g.coeffs.col(pos(2 * i - 1, 2 * j, N)) = 2.0 * B;
      } else {
        g.coeffs.col(pos(2 * j, 2 * i - 1, N)) = -2.0 * B;
      }
    }
  }
  return g;
}

ComplexForm real2_to_real11(const RealForm& g) {
  if (g.degree != 2 || g.dim % 2 != 0) throw DegreeMismatch("expected a 2-form in even dimension");
  const int N = g.dim;
  const int n = N / 2;
  const double scale = g.coeffs.size() > 0 ? g.coeffs.cwiseAbs().maxCoeff() : 0.0;
  const double tol = 1e-10 * scale;
  ComplexForm f{n, {1, 1}, Eigen::MatrixXcd::Zero(g.nodes(), static_cast<Eigen::Index>(n) * n)};
  const auto B = [&](int i, int j) -> Eigen::VectorXd {
    return i <= j ? Eigen::VectorXd(0.5 * g.coeffs.col(pos(2 * i - 1, 2 * j, N)))
                  : Eigen::VectorXd(-0.5 * g.coeffs.col(pos(2 * j, 2 * i - 1, N)));
  };
  double defect = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      Eigen::VectorXd A = Eigen::VectorXd::Zero(g.nodes());
      if (i != j) {
        const int a = std::min(i, j), b = std::max(i, j);
        const auto dx = g.coeffs.col(pos(2 * a - 1, 2 * b - 1, N));
        const auto dy = g.coeffs.col(pos(2 * a, 2 * b, N));
        if (g.nodes() > 0) defect = std::max(defect, (dx - dy).cwiseAbs().maxCoeff());
        A = (i < j ? 0.5 : -0.5) * dx;
        if (i < j && g.nodes() > 0) defect = std::max(defect, (B(i, j) - B(j, i)).cwiseAbs().maxCoeff());
      }
      f.at11_col(i, j) = A.cast<std::complex<double>>() + I * B(i, j).cast<std::complex<double>>();
    }
  }
  if (defect > tol) {
    throw ValidationError("2-form is not the image of a real (1,1) form: mismatch " +
                              std::to_string(defect),
                          defect);
  }
  return f;
}

std::pair<ComplexForm, ComplexForm> split_1form(const RealForm& v) {
  if (v.degree != 1 || v.dim % 2 != 0) throw DegreeMismatch("expected a 1-form in even dimension");
  const int n = v.dim / 2;
  ComplexForm v10{n, {1, 0}, Eigen::MatrixXcd(v.nodes(), n)};
  ComplexForm v01{n, {0, 1}, Eigen::MatrixXcd(v.nodes(), n)};
  for (int j = 1; j <= n; ++j) {
    const Eigen::VectorXcd a = 0.5 * v.coeffs.col(2 * j - 2).cast<std::complex<double>>();
    const Eigen::VectorXcd b = 0.5 * v.coeffs.col(2 * j - 1).cast<std::complex<double>>();
    v10.coeffs.col(j - 1) = a - I * b;
    v01.coeffs.col(j - 1) = a + I * b;
  }
  return {std::move(v10), std::move(v01)};
}

Eigen::MatrixXcd reassemble_1form(const ComplexForm& v10, const ComplexForm& v01) {
  if (!(v10.bidegree == Bidegree{1, 0}) || !(v01.bidegree == Bidegree{0, 1}) ||
      v10.nodes() != v01.nodes()) {
    throw DegreeMismatch("reassembly needs a (1,0) and a (0,1) form on the same level");
  }
  const int n = v10.n;
  Eigen::MatrixXcd out(v10.nodes(), 2 * n);
  for (int j = 1; j <= n; ++j) {
    out.col(2 * j - 2) = v10.coeffs.col(j - 1) + v01.coeffs.col(j - 1);
    out.col(2 * j - 1) = I * (v10.coeffs.col(j - 1) - v01.coeffs.col(j - 1));
  }
  return out;
}

Eigen::MatrixXcd complex2_to_real_coords(const ComplexForm& f) {
  const int n = f.n;
  const int N = 2 * n;
  // Real-coordinate coefficient vectors of dz_k and dzbar_k.
  const auto dz = [&](int k, bool bar) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N);
    e[2 * k - 2] = 1.0;
    e[2 * k - 1] = bar ? -I : I;
    return e;
  };
  // Wedge of two 1-forms: (a^b)_{st} = a_s b_t - a_t b_s for s < t.
  std::vector<std::pair<int, int>> pairs;
  for (int s = 1; s <= N; ++s) {
    for (int t = s + 1; t <= N; ++t) pairs.emplace_back(s, t);
  }
  const auto wedge = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd w(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [s, t] = pairs[k];
      w[static_cast<Eigen::Index>(k)] = a[s - 1] * b[t - 1] - a[t - 1] * b[s - 1];
    }
    return w;
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(f.nodes(), static_cast<Eigen::Index>(pairs.size()));
  const auto accumulate = [&](Eigen::Index col, const Eigen::VectorXcd& basis) {
    out += f.coeffs.col(col) * basis.transpose();
  };
  if (f.bidegree == Bidegree{1, 1}) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) accumulate((i - 1) * n + (j - 1), wedge(dz(i, false), dz(j, true)));
    }
  } else if (f.bidegree == Bidegree{2, 0} || f.bidegree == Bidegree{0, 2}) {
    const bool bar = f.bidegree.q == 2;
    for (int k = 1; k <= n; ++k) {
      for (int j = k + 1; j <= n; ++j) {
        accumulate(static_cast<Eigen::Index>(MultiIndex({k, j}, n).position()),
                   wedge(dz(k, bar), dz(j, bar)));
      }
    }
  } else {
    throw DegreeMismatch("expected a complex 2-form, got " + f.bidegree.to_string());
  }
  return out;
}

HessianSplit hessian_split(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols() || H.rows() % 2 != 0) {
    throw std::invalid_argument("complex Hessian split needs an even square matrix");
  }
  const int n = static_cast<int>(H.rows() / 2);
  HessianSplit s{Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n)};
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double xx = H(2 * j, 2 * k), yy = H(2 * j + 1, 2 * k + 1);
      const double xy = H(2 * j, 2 * k + 1), yx = H(2 * j + 1, 2 * k);
      s.holomorphic(j, k) = 0.25 * std::complex<double>(xx - yy, -(xy + yx));
      s.mixed(j, k) = 0.25 * std::complex<double>(xx + yy, xy - yx);
    }
  }
  s.anti = s.holomorphic.conjugate();
  return s;
}

std::vector<int> split_to_interleaved(int n) {
  std::vector<int> perm(static_cast<std::size_t>(2 * n));
  for (int j = 1; j <= n; ++j) {
    perm[static_cast<std::size_t>(j - 1)] = 2 * j - 1;
    perm[static_cast<std::size_t>(j - 1 + n)] = 2 * j;
  }
  return perm;
}

Eigen::MatrixXd split_to_interleaved(const Eigen::MatrixXd& split) {
  if (split.rows() != split.cols() || split.rows() % 2 != 0) {
    throw std::invalid_argument("expected an even square matrix");
  }
  const auto perm = split_to_interleaved(static_cast<int>(split.rows() / 2));
  Eigen::MatrixXd out(split.rows(), split.cols());
  for (std::size_t a = 0; a < perm.size(); ++a) {
    for (std::size_t b = 0; b < perm.size(); ++b) {
      out(perm[a] - 1, perm[b] - 1) = split(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return out;
}

Eigen::VectorXcd omega_from_xi(const Eigen::VectorXd& xi) {
  if (xi.size() % 2 != 0) throw std::invalid_argument("xi needs even length");
  const Eigen::Index n = xi.size() / 2;
  Eigen::VectorXcd w(n);
  for (Eigen::Index j = 0; j < n; ++j) w[j] = {xi[2 * j], xi[2 * j + 1]};
  return w;
}

IdentitySides hessian_split_identity(const Weight& w, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& xi) {
  const Eigen::MatrixXd H = w.hessian(x);
  const HessianSplit s = hessian_split(H);
  const Eigen::VectorXcd om = omega_from_xi(xi);
  const std::complex<double> rhs = (om.transpose() * s.holomorphic * om).value() +
                                   2.0 * (om.transpose() * s.mixed * om.conjugate()).value() +
                                   (om.adjoint() * s.anti * om.conjugate()).value();
  return {xi.dot(H * xi), rhs.real()};
}

IdentitySides levi_lower_bound(const Weight& w, double c, const Eigen::VectorXd& x,
                               const Eigen::VectorXcd& omega) {
  const HessianSplit s = hessian_split(w.hessian(x));
  const std::complex<double> levi = (omega.transpose() * s.mixed * omega.conjugate()).value();
  const std::complex<double> hol = (omega.transpose() * s.holomorphic * omega).value();
  return {levi.real(), 0.5 * c * omega.squaredNorm() + std::abs(hol)};
}

}  // namespace pellel
