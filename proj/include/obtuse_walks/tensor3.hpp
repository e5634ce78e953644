#pragma once

#include <vector>

#include "obtuse_walks/obtuse.hpp"

namespace obtuse_walks {

/// Structure constants of the coordinate algebra of an obtuse system:
/// X^i X^j = sum_k T_k^{ij} X^k for i, j, k in {0, ..., N}.
///
/// Stored densely, flat row-major in (i, j, k). The entries with a zero
/// index follow the extended convention T_0^{ij} = T_j^{i0} = T_j^{0i} = δ_ij.
class ThreeTensor {
 public:
  ThreeTensor() = default;
  /// Zero tensor of dimension N with the extended entries filled in.
  explicit ThreeTensor(int dim);
  /// Throws MalformedInputError unless coeffs.size() == (N+1)^3.
  ThreeTensor(int dim, std::vector<double> coeffs);

  int dim() const { return dim_; }
  int site_dim() const { return dim_ + 1; }

  /// T_k^{ij}
  double operator()(int i, int j, int k) const { return coeffs_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return coeffs_[index(i, j, k)]; }

  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  std::size_t index(int i, int j, int k) const {
    const auto s = static_cast<std::size_t>(dim_ + 1);
    return (static_cast<std::size_t>(i) * s + static_cast<std::size_t>(j)) * s +
           static_cast<std::size_t>(k);
  }

  int dim_ = 0;
  std::vector<double> coeffs_;
};

/// T_k^{ij} = E[X^i X^j X^k], the projection of X^i X^j on the orthonormal
/// basis X^0, ..., X^N. Throws DomainError if the system fails
/// validate_obtuse at `tol`.
ThreeTensor compute_tensor(const ObtuseSystem& system, double tol = kDefaultTol);

/// max over l, i, j of |v_l^i v_l^j - sum_m T_m^{ij} v_l^m|.
double product_identity_residual(const ThreeTensor& t, const ObtuseSystem& system);

struct SesquiSymmetryReport {
  double tol = kDefaultTol;
  /// max |T(π(i,j,k)) - T(i,j,k)| over i, j, k >= 1 and all permutations π.
  double index_symmetry = 0.0;
  /// Same for S(i,j,l,m) = sum_{k=0}^N T_k^{ij} T_k^{lm} over all indices.
  double product_symmetry = 0.0;
  /// Whether every entry with a zero index equals the Kronecker delta exactly.
  bool extended_entries_exact = true;

  bool passed() const {
    return extended_entries_exact && index_symmetry <= tol && product_symmetry <= tol;
  }
};

SesquiSymmetryReport check_sesqui_symmetry(const ThreeTensor& t, double tol = kDefaultTol);

/// Condition (ii) in its unextended form: sum_{k=1}^N T_k^{ij} T_k^{lm} + δ_ij δ_lm
/// over i, j, l, m >= 1. Kept to cross-check the extended form.
double unextended_product_symmetry(const ThreeTensor& t);

}  // namespace obtuse_walks
