#include "pellel/polynomial.hpp"

#include <cmath>

namespace pellel {

Polynomial Polynomial::constant(int dim, double c) {
  return monomial(dim, Exponent(static_cast<std::size_t>(dim), 0), c);
}

Polynomial Polynomial::coordinate(int dim, int j) {
  if (j < 1 || j > dim) throw DomainError("coordinate index out of range");
  Exponent e(static_cast<std::size_t>(dim), 0);
  e[static_cast<std::size_t>(j - 1)] = 1;
  return monomial(dim, std::move(e), 1.0);
}

Polynomial Polynomial::monomial(int dim, Exponent exponent, double coeff) {
  if (static_cast<int>(exponent.size()) != dim) throw std::invalid_argument("exponent length mismatch");
  Polynomial p(dim);
  p.add_term(exponent, coeff);
  return p;
}

void Polynomial::add_term(const Exponent& e, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

int Polynomial::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    deg = std::max(deg, s);
  }
  return deg;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw std::invalid_argument("point dimension mismatch");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int j = 0; j < dim_; ++j) {
      for (int k = 0; k < e[static_cast<std::size_t>(j)]; ++k) m *= x[j];
    }
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::derivative(int j) const {
  if (j < 1 || j > dim_) throw DomainError("derivative axis out of range");
  Polynomial out(dim_);
  const auto a = static_cast<std::size_t>(j - 1);
  for (const auto& [e, c] : terms_) {
    if (e[a] == 0) continue;
    Exponent f = e;
    f[a] -= 1;
    out.add_term(f, c * e[a]);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.dim_ != dim_) throw std::invalid_argument("polynomial dimension mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("polynomial dimension mismatch");
  Polynomial out(a.dim_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponent e = ea;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Polynomial random_polynomial(int dim, int max_degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Polynomial p(dim);
  Polynomial::Exponent e(static_cast<std::size_t>(dim), 0);
  // Odometer over exponents with entries 0..max_degree, keeping total <= max_degree.
  while (true) {
    int total = 0;
    for (int k : e) total += k;
    if (total <= max_degree) p += Polynomial::monomial(dim, e, coeff(rng));
    std::size_t k = 0;
    while (k < e.size() && ++e[k] > max_degree) e[k++] = 0;
    if (k == e.size()) break;
  }
  return p;
}

PolyForm::PolyForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (degree < 0 || degree > dim + 1) throw DomainError("form degree out of range");
  coeffs_.assign(binomial(dim, degree), Polynomial(dim));
}

Polynomial PolyForm::at(std::span<const int> seq) const {
  if (static_cast<int>(seq.size()) != degree_) throw DomainError("index sequence has wrong length");
  const SignedIndex s = sort_signature(seq, dim_);
  if (s.sign == 0) return Polynomial(dim_);
  return (*this)[s.index] * static_cast<double>(s.sign);
}

PolyForm PolyForm::d() const {
  if (degree_ > dim_) throw DomainError("cannot differentiate a form of degree N+1");
  PolyForm out(dim_, degree_ + 1);
  for (const auto& e : wedge_table(dim_, degree_)) {
    Polynomial t = coeffs_[e.source].derivative(e.axis);
    out.coeffs_[e.target] += t * static_cast<double>(e.sign);
  }
  return out;
}

PolyForm& PolyForm::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

PolyForm PolyForm::times(const Polynomial& g) const {
  PolyForm out = *this;
  for (auto& c : out.coeffs_) c = c * g;
  return out;
}

Eigen::VectorXd PolyForm::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(coeffs_.size()));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v[static_cast<Eigen::Index>(k)] = coeffs_[k](x);
  return v;
}

RealForm PolyForm::sample(const Grid& grid) const {
  if (grid.dim() != dim_) throw std::invalid_argument("grid dimension mismatch");
  return RealForm::sample(grid, degree_, [this](const Eigen::VectorXd& x) { return evaluate(x); });
}

PolyForm random_poly_form(int dim, int degree, int max_degree, std::mt19937_64& rng) {
  PolyForm a(dim, degree);
  for (std::size_t k = 0; k < a.components().size(); ++k) {
    a.component(k) = random_polynomial(dim, max_degree, rng);
  }
  return a;
}

Polynomial rho_polynomial(const Domain& domain) {
  const int N = domain.dim();
  Polynomial rho = Polynomial::constant(N, -1.0);
  for (int j = 1; j <= N; ++j) {
    const double a = domain.semi_axes()[j - 1];
    const Polynomial t =
        Polynomial::coordinate(N, j) - Polynomial::constant(N, domain.center()[j - 1]);
    rho += (t * t) * (1.0 / (a * a));
  }
  return rho;
}

PolyForm tangential_1form(const Domain& domain, const Polynomial& g) {
  if (domain.dim() != 2) throw UnsupportedDomainError("tangential generator is planar only");
  const Polynomial rho = rho_polynomial(domain);
  PolyForm a(2, 1);
  a.component(0) = (g * rho.derivative(2)) * -0.5;
  a.component(1) = (g * rho.derivative(1)) * 0.5;
  return a;
}

}  // namespace pellel
