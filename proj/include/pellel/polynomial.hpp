#pragma once

#include <map>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pellel/domain.hpp"
#include "pellel/forms.hpp"
#include "pellel/multiindex.hpp"

namespace pellel {

/// Sparse multivariate polynomial with double coefficients.
class Polynomial {
 public:
  using Exponent = std::vector<int>;

  explicit Polynomial(int dim = 0) : dim_(dim) {}
  static Polynomial constant(int dim, double c);
  /// x_j, 1-based.
  static Polynomial coordinate(int dim, int j);
  static Polynomial monomial(int dim, Exponent exponent, double coeff = 1.0);

  int dim() const { return dim_; }
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;

  double operator()(const Eigen::VectorXd& x) const;
  /// d/dx_j, 1-based.
  Polynomial derivative(int j) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  void add_term(const Exponent& e, double c);

  int dim_ = 0;
  std::map<Exponent, double> terms_;
};

/// Coefficients uniform in [-1, 1] on every monomial of total degree <= max_degree.
Polynomial random_polynomial(int dim, int max_degree, std::mt19937_64& rng);

/// Polynomial p-form: one polynomial per increasing multiindex (lexicographic).
class PolyForm {
 public:
  PolyForm(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::vector<Polynomial>& components() const { return coeffs_; }

  Polynomial& operator[](const MultiIndex& I) { return coeffs_.at(I.position()); }
  const Polynomial& operator[](const MultiIndex& I) const { return coeffs_.at(I.position()); }
  Polynomial& component(std::size_t pos) { return coeffs_.at(pos); }
  const Polynomial& component(std::size_t pos) const { return coeffs_.at(pos); }

  /// alpha_{j1...jq} for an arbitrary index sequence (antisymmetric extension).
  Polynomial at(std::span<const int> seq) const;

  PolyForm d() const;
  PolyForm& operator*=(double s);
  friend PolyForm operator*(double s, PolyForm a) { return a *= s; }
  /// g * alpha.
  PolyForm times(const Polynomial& g) const;

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;
  /// Samples the form on grid level `degree`.
  RealForm sample(const Grid& grid) const;

 private:
  int dim_;
  int degree_;
  std::vector<Polynomial> coeffs_;
};

PolyForm random_poly_form(int dim, int degree, int max_degree, std::mt19937_64& rng);

/// rho of an axis-aligned ellipsoid as a polynomial.
Polynomial rho_polynomial(const Domain& domain);

/// g * (-(rho_2 / 2) dx_1 + (rho_1 / 2) dx_2) for a planar domain; tangent to
/// the boundary, and -x_2 dx_1 + x_1 dx_2 on the unit disk when g = 1.
PolyForm tangential_1form(const Domain& domain, const Polynomial& g);

}  // namespace pellel
