#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "pellel/domain.hpp"
#include "pellel/multiindex.hpp"

namespace pellel {

class DegreeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Real p-form sampled on grid level p. Row n holds the coefficients at node
/// n; column k is the k-th increasing multiindex in lexicographic order.
struct RealForm {
  int dim = 0;
  int degree = 0;
  Eigen::MatrixXd coeffs;

  Eigen::Index nodes() const { return coeffs.rows(); }
  Eigen::Index components() const { return coeffs.cols(); }

  static RealForm zero(const Grid& grid, int degree);
  /// Evaluates fn(x) -> coefficient vector at every level-p node.
  static RealForm sample(const Grid& grid, int degree,
                         const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn);

  /// Component-major flattening (all nodes of component 0 first).
  Eigen::VectorXd flat() const {
    return Eigen::Map<const Eigen::VectorXd>(coeffs.data(), coeffs.size());
  }
  static RealForm from_flat(int dim, int degree, Eigen::Index nodes,
                            const Eigen::VectorXd& v);
};

struct Bidegree {
  int p = 0;
  int q = 0;
  int total() const { return p + q; }
  std::string to_string() const;
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

/// Number of coefficients per node: n for (1,0)/(0,1), n*n for (1,1)
/// (full matrix f_{i jbar}, column i*n + j), C(n,2) for (2,0)/(0,2).
Eigen::Index component_count(int n, Bidegree b);

/// Complex (p,q)-form in complex dimension n, sampled on grid level p+q.
struct ComplexForm {
  int n = 0;
  Bidegree bidegree;
  Eigen::MatrixXcd coeffs;

  int level() const { return bidegree.total(); }
  Eigen::Index nodes() const { return coeffs.rows(); }

  static ComplexForm zero(const Grid& grid, Bidegree b);
  static ComplexForm sample(
      const Grid& grid, Bidegree b,
      const std::function<Eigen::VectorXcd(const Eigen::VectorXd&)>& fn);

  Eigen::VectorXcd flat() const {
    return Eigen::Map<const Eigen::VectorXcd>(coeffs.data(), coeffs.size());
  }
  static ComplexForm from_flat(int n, Bidegree b, Eigen::Index nodes,
                               const Eigen::VectorXcd& v);

  /// Coefficient f_{i jbar} (1-based) of a (1,1) form at a node.
  std::complex<double>& at11(Eigen::Index node, int i, int j) {
    return coeffs(node, (i - 1) * n + (j - 1));
  }
  std::complex<double> at11(Eigen::Index node, int i, int j) const {
    return coeffs(node, (i - 1) * n + (j - 1));
  }
  auto at11_col(int i, int j) { return coeffs.col((i - 1) * n + (j - 1)); }
  auto at11_col(int i, int j) const { return coeffs.col((i - 1) * n + (j - 1)); }
};

/// e^{-phi(x)} h^N at every node of a level.
Eigen::VectorXd quadrature_weights(const Grid& grid, const Weight& weight, int level);

/// Pointwise f.g = sum' f_I g_I.
Eigen::VectorXd dot(const RealForm& f, const RealForm& g);
double weighted_inner(const RealForm& f, const RealForm& g, const Weight& weight,
                      const Grid& grid);
double weighted_inner(const RealForm& f, const RealForm& g, const Eigen::VectorXd& node_weights);

/// Pointwise f.conj(g) over all stored coefficients.
Eigen::VectorXcd hermitian_dot(const ComplexForm& f, const ComplexForm& g);
/// Pointwise |f|^2 = f.conj(f).
Eigen::VectorXd norm11(const ComplexForm& f);
std::complex<double> weighted_inner(const ComplexForm& f, const ComplexForm& g,
                                    const Weight& weight, const Grid& grid);
std::complex<double> weighted_inner(const ComplexForm& f, const ComplexForm& g,
                                    const Eigen::VectorXd& node_weights);

/// Flat CSV snapshot: one row "node,component,value" (real) or
/// "node,component,re,im" (complex), component in lexicographic position.
void write_csv(std::ostream& os, const RealForm& f);
void write_csv(std::ostream& os, const ComplexForm& f);
RealForm read_real_csv(std::istream& is, const Grid& grid, int degree);
ComplexForm read_complex_csv(std::istream& is, const Grid& grid, Bidegree b);

}  // namespace pellel
