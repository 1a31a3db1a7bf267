#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pellel/domain.hpp"
#include "pellel/forms.hpp"

namespace pellel {

class ValidationError : public std::invalid_argument {
 public:
  ValidationError(const std::string& what, double defect)
      : std::invalid_argument(what), defect_(defect) {}
  double defect() const { return defect_; }

 private:
  double defect_;
};

/// max |f_{i jbar} + conj(f_{j ibar})| over nodes and index pairs. Zero iff f
/// is a real (1,1) form.
double realness_defect(const ComplexForm& f);

/// Write f = f1 + i f2 with f1, f2 real (1,1) forms:
/// f1_{i jbar} = (f_{i jbar} - conj f_{j ibar}) / 2,
/// f2_{i jbar} = (f_{i jbar} + conj f_{j ibar}) / (2i).
std::pair<ComplexForm, ComplexForm> split_nonreal(const ComplexForm& f);

/// Real 2-form of a real (1,1) form, with f_{i jbar} = A + iB:
/// 2 (sum_{i<j} A dx_i^dx_j + sum_{i<j} A dy_i^dy_j + sum_{i,j} B dx_i^dy_j),
/// x_i = x_{2i-1}, y_i = x_{2i}. Without require_real the real part f1 of
/// split_nonreal is converted.
RealForm real11_to_real2(const ComplexForm& f, bool require_real = true);

/// Inverse of real11_to_real2; rejects 2-forms whose dx and dy blocks differ
/// or whose mixed block is not symmetric.
ComplexForm real2_to_real11(const RealForm& g);

/// v = v10 + v01 with v10_j = v_{2j-1}/2 + v_{2j}/(2i) and v01 = conj(v10).
std::pair<ComplexForm, ComplexForm> split_1form(const RealForm& v);

/// Real-coordinate coefficients (complex) of v10 + v01: dx_j -> v10 + v01,
/// dy_j -> i (v10 - v01). Nodes x N matrix.
Eigen::MatrixXcd reassemble_1form(const ComplexForm& v10, const ComplexForm& v01);

/// Real-coordinate coefficients of a (2,0), (1,1) or (0,2) form by expanding
/// dz_k = dx_k + i dy_k, dzbar_k = dx_k - i dy_k. Nodes x C(2n,2) matrix.
Eigen::MatrixXcd complex2_to_real_coords(const ComplexForm& f);

/// Blocks of the complex Hessian in the interleaved convention.
struct HessianSplit {
  Eigen::MatrixXcd holomorphic;  // phi_{z_j z_k}
  Eigen::MatrixXcd mixed;        // phi_{z_j zbar_k}
  Eigen::MatrixXcd anti;         // phi_{zbar_j zbar_k}
};

HessianSplit hessian_split(const Eigen::MatrixXd& real_hessian);

/// Position in interleaved order (x_1, y_1, x_2, y_2, ...) of every split
/// coordinate (x_1, ..., x_n, y_1, ..., y_n); 1-based.
std::vector<int> split_to_interleaved(int n);
/// Reorders a matrix given in split coordinates into interleaved ones.
Eigen::MatrixXd split_to_interleaved(const Eigen::MatrixXd& split);

/// omega_j = xi_{2j-1} + i xi_{2j}.
Eigen::VectorXcd omega_from_xi(const Eigen::VectorXd& xi);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = sum phi_{jk} xi_j xi_k; rhs = sum (phi_zz w w + 2 phi_{z zbar} w wbar
/// + phi_{zbar zbar} wbar wbar), evaluated at x.
IdentitySides hessian_split_identity(const Weight& w, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& xi);

/// lhs = sum phi_{j kbar} w_j conj(w_k); rhs = c/2 |w|^2 + |sum phi_{z_j z_k} w_j w_k|.
IdentitySides levi_lower_bound(const Weight& w, double c, const Eigen::VectorXd& x,
                               const Eigen::VectorXcd& omega);

}  // namespace pellel
