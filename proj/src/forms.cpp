#include "pellel/forms.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace pellel {

namespace {

void require_same(const RealForm& f, const RealForm& g) {
  if (f.degree != g.degree || f.dim != g.dim || f.coeffs.rows() != g.coeffs.rows()) {
    throw DegreeMismatch("real forms differ in degree or grid: " + std::to_string(f.degree) +
                         " vs " + std::to_string(g.degree));
  }
}

void require_same(const ComplexForm& f, const ComplexForm& g) {
  if (!(f.bidegree == g.bidegree) || f.n != g.n || f.coeffs.rows() != g.coeffs.rows()) {
    throw DegreeMismatch("complex forms differ in bidegree or grid: " +
                         f.bidegree.to_string() + " vs " + g.bidegree.to_string());
  }
}

int complex_dim(const Grid& grid) {
  if (grid.dim() % 2 != 0) {
    throw std::invalid_argument("complex forms need an even real dimension");
  }
  return grid.dim() / 2;
}

}  // namespace

RealForm RealForm::zero(const Grid& grid, int degree) {
  if (degree < 0 || degree > grid.dim()) throw DegreeMismatch("degree out of range");
  return {grid.dim(), degree,
          Eigen::MatrixXd::Zero(grid.size(degree),
                                static_cast<Eigen::Index>(binomial(grid.dim(), degree)))};
}

RealForm RealForm::sample(const Grid& grid, int degree,
                          const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn) {
  RealForm f = zero(grid, degree);
  for (Eigen::Index n = 0; n < f.nodes(); ++n) {
    const Eigen::VectorXd v = fn(grid.point(degree, n));
    if (v.size() != f.components()) throw DegreeMismatch("sampled coefficient count mismatch");
    f.coeffs.row(n) = v.transpose();
  }
  return f;
}

RealForm RealForm::from_flat(int dim, int degree, Eigen::Index nodes, const Eigen::VectorXd& v) {
  const auto comps = static_cast<Eigen::Index>(binomial(dim, degree));
  if (v.size() != nodes * comps) throw DegreeMismatch("flat vector has wrong length");
  return {dim, degree, Eigen::Map<const Eigen::MatrixXd>(v.data(), nodes, comps)};
}

std::string Bidegree::to_string() const {
  return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

Eigen::Index component_count(int n, Bidegree b) {
  if (b == Bidegree{0, 0}) return 1;
  if (b == Bidegree{1, 0} || b == Bidegree{0, 1}) return n;
  if (b == Bidegree{1, 1}) return static_cast<Eigen::Index>(n) * n;
  if (b == Bidegree{2, 0} || b == Bidegree{0, 2}) {
    return static_cast<Eigen::Index>(binomial(n, 2));
  }
  throw DegreeMismatch("unsupported bidegree " + b.to_string());
}

ComplexForm ComplexForm::zero(const Grid& grid, Bidegree b) {
  const int n = complex_dim(grid);
  return {n, b, Eigen::MatrixXcd::Zero(grid.size(b.total()), component_count(n, b))};
}

ComplexForm ComplexForm::sample(
    const Grid& grid, Bidegree b,
    const std::function<Eigen::VectorXcd(const Eigen::VectorXd&)>& fn) {
  ComplexForm f = zero(grid, b);
  for (Eigen::Index k = 0; k < f.nodes(); ++k) {
    const Eigen::VectorXcd v = fn(grid.point(b.total(), k));
    if (v.size() != f.coeffs.cols()) throw DegreeMismatch("sampled coefficient count mismatch");
    f.coeffs.row(k) = v.transpose();
  }
  return f;
}

ComplexForm ComplexForm::from_flat(int n, Bidegree b, Eigen::Index nodes,
                                   const Eigen::VectorXcd& v) {
  const auto comps = component_count(n, b);
  if (v.size() != nodes * comps) throw DegreeMismatch("flat vector has wrong length");
  return {n, b, Eigen::Map<const Eigen::MatrixXcd>(v.data(), nodes, comps)};
}

Eigen::VectorXd quadrature_weights(const Grid& grid, const Weight& weight, int level) {
  Eigen::VectorXd w(grid.size(level));
  for (Eigen::Index n = 0; n < w.size(); ++n) {
    w[n] = std::exp(-weight.value(grid.point(level, n))) * grid.cell_volume();
  }
  return w;
}

Eigen::VectorXd dot(const RealForm& f, const RealForm& g) {
  require_same(f, g);
  return f.coeffs.cwiseProduct(g.coeffs).rowwise().sum();
}

double weighted_inner(const RealForm& f, const RealForm& g, const Eigen::VectorXd& node_weights) {
  const Eigen::VectorXd pointwise = dot(f, g);
  if (pointwise.size() != node_weights.size()) throw DegreeMismatch("weights/grid mismatch");
  return pointwise.dot(node_weights);
}

double weighted_inner(const RealForm& f, const RealForm& g, const Weight& weight,
                      const Grid& grid) {
  return weighted_inner(f, g, quadrature_weights(grid, weight, f.degree));
}

Eigen::VectorXcd hermitian_dot(const ComplexForm& f, const ComplexForm& g) {
  require_same(f, g);
  return f.coeffs.cwiseProduct(g.coeffs.conjugate()).rowwise().sum();
}

Eigen::VectorXd norm11(const ComplexForm& f) { return f.coeffs.cwiseAbs2().rowwise().sum(); }

std::complex<double> weighted_inner(const ComplexForm& f, const ComplexForm& g,
                                    const Eigen::VectorXd& node_weights) {
  const Eigen::VectorXcd pointwise = hermitian_dot(f, g);
  if (pointwise.size() != node_weights.size()) throw DegreeMismatch("weights/grid mismatch");
  return (pointwise.array() * node_weights.array()).sum();
}

std::complex<double> weighted_inner(const ComplexForm& f, const ComplexForm& g,
                                    const Weight& weight, const Grid& grid) {
  return weighted_inner(f, g, quadrature_weights(grid, weight, f.level()));
}

void write_csv(std::ostream& os, const RealForm& f) {
  os << "node,component,value\n";
  os.precision(17);
  for (Eigen::Index n = 0; n < f.nodes(); ++n) {
    for (Eigen::Index k = 0; k < f.components(); ++k) {
      os << n << ',' << k << ',' << f.coeffs(n, k) << '\n';
    }
  }
}

void write_csv(std::ostream& os, const ComplexForm& f) {
  os << "node,component,re,im\n";
  os.precision(17);
  for (Eigen::Index n = 0; n < f.nodes(); ++n) {
    for (Eigen::Index k = 0; k < f.coeffs.cols(); ++k) {
      os << n << ',' << k << ',' << f.coeffs(n, k).real() << ',' << f.coeffs(n, k).imag()
         << '\n';
    }
  }
}

namespace {

template <typename Visit>
void read_rows(std::istream& is, int expected_fields, Visit&& visit) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("form CSV is empty");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> fields;
    while (std::getline(ss, cell, ',')) fields.push_back(std::stod(cell));
    if (static_cast<int>(fields.size()) != expected_fields) {
      throw std::runtime_error("form CSV row has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(expected_fields));
    }
    visit(fields);
  }
}

}  // namespace

RealForm read_real_csv(std::istream& is, const Grid& grid, int degree) {
  RealForm f = RealForm::zero(grid, degree);
  read_rows(is, 3, [&](const std::vector<double>& r) {
    const auto n = static_cast<Eigen::Index>(r[0]);
    const auto k = static_cast<Eigen::Index>(r[1]);
    if (n < 0 || n >= f.nodes() || k < 0 || k >= f.components()) {
      throw std::runtime_error("form CSV index out of range for this grid");
    }
    f.coeffs(n, k) = r[2];
  });
  return f;
}

ComplexForm read_complex_csv(std::istream& is, const Grid& grid, Bidegree b) {
  ComplexForm f = ComplexForm::zero(grid, b);
  read_rows(is, 4, [&](const std::vector<double>& r) {
    const auto n = static_cast<Eigen::Index>(r[0]);
    const auto k = static_cast<Eigen::Index>(r[1]);
    if (n < 0 || n >= f.nodes() || k < 0 || k >= f.coeffs.cols()) {
      throw std::runtime_error("form CSV index out of range for this grid");
    }
    f.coeffs(n, k) = {r[2], r[3]};
  });
  return f;
}

}  // namespace pellel
