#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obtuse_walks/noise.hpp"
#include "obtuse_walks/obtuse.hpp"
#include "obtuse_walks/tensor3.hpp"

namespace obtuse_walks {

/// Unitarity tolerance for operators handed to us (W's, U). Classical-form
/// residuals use the caller's tolerance instead.
inline constexpr double kStructuralTol = 1e-8;

/// A unitary on H_0 ⊗ C^{N+1} written as U = sum_{i,j} U^i_j ⊗ a^i_j.
class BlockUnitary {
 public:
  BlockUnitary() = default;
  /// All blocks zero.
  BlockUnitary(Eigen::Index system_dim, Eigen::Index site_dim);

  Eigen::Index system_dim() const { return system_dim_; }
  Eigen::Index site_dim() const { return site_dim_; }

  /// U^i_j
  const ComplexMatrix& block(Eigen::Index i, Eigen::Index j) const {
    return blocks_[static_cast<std::size_t>(i * site_dim_ + j)];
  }
  ComplexMatrix& block(Eigen::Index i, Eigen::Index j) {
    return blocks_[static_cast<std::size_t>(i * site_dim_ + j)];
  }

  /// sum U^i_j ⊗ a^i_j with H_0 as the slow index; this is the ordering the
  /// chain uses.
  ComplexMatrix to_dense() const;

  /// Site-major layout: block row j, block column i holds U^i_j. This is the
  /// conventional 2x2-block picture for N = 1.
  ComplexMatrix to_block_matrix() const;

  static BlockUnitary from_dense(const ComplexMatrix& dense, Eigen::Index system_dim,
                                 Eigen::Index site_dim);

  /// Throws MalformedInputError on inconsistent block shapes.
  void check_structure() const;

  double unitarity_residual() const;

 private:
  Eigen::Index system_dim_ = 0;
  Eigen::Index site_dim_ = 0;
  std::vector<ComplexMatrix> blocks_;
};

/// Witness that a block unitary is driven by the obtuse random walk of `system`:
/// U^i_j = sum_k T_k^{ij} B_k with every W_l = sum_i v_l^i B_i unitary.
struct ClassicalForm {
  ObtuseSystem system;
  ThreeTensor tensor;
  std::vector<ComplexMatrix> w;
  std::vector<ComplexMatrix> b;

  Eigen::Index system_dim() const { return w.empty() ? 0 : w.front().rows(); }
};

/// U^k_l = sum_i p_i v_i^k v_i^l W_i. Throws DomainError naming the first W
/// whose unitarity residual exceeds kStructuralTol.
BlockUnitary build_u(const std::vector<ComplexMatrix>& w, const ObtuseSystem& system);

/// N = 1 closed form for the law (p, 1-p):
///   [ pW0 + qW1        sqrt(pq)(W0 - W1) ]
///   [ sqrt(pq)(W0 - W1)  qW0 + pW1       ]
BlockUnitary build_u_bernoulli(const ComplexMatrix& w0, const ComplexMatrix& w1, double p);

/// Classical form from W's (B_i = sum_l p_l v_l^i W_l), without building U.
ClassicalForm make_classical_form(const std::vector<ComplexMatrix>& w, const ObtuseSystem& system);

struct DetectionReport {
  double tol = 1e-8;
  bool accepted = false;
  std::string failed_check;  // "", "input_unitarity", "coefficients", "w_unitarity"

  double input_unitarity = 0.0;  // ||U*U - I||_F of the dense U
  /// (a) max_{i,j} ||U^i_j - sum_k T_k^{ij} B_k||_F and where it occurs.
  double coefficient_residual = 0.0;
  int worst_i = 0;
  int worst_j = 0;
  /// (b) max_l two-sided unitarity residual of W_l and where it occurs.
  double w_unitarity_residual = 0.0;
  int worst_l = 0;
  std::vector<double> w_residuals;

  std::optional<ClassicalForm> form;
};

/// Reads B_i off the column U^i_0 (the extended tensor makes T_k^{i0} = δ_ik),
/// then checks (a) every block against sum_k T_k^{ij} B_k and (b) unitarity of
/// W_l = sum_i v_l^i B_i. Rejection is a report, not an exception; only
/// dimension mismatch throws (DomainError).
DetectionReport detect_classical(const BlockUnitary& u, const ObtuseSystem& system,
                                 double tol = 1e-8);

/// sum_k B_k ⊗ M_k(site) on n sites, M_0 = I.
ChainOperator classical_step_operator(const ClassicalForm& form, int sites, int site,
                                      bool allow_large = guard_override_from_env());

/// sum_{i,j} U^i_j ⊗ a^i_j(site) on n sites, built from matrix units.
ChainOperator ampliate_block_unitary(const BlockUnitary& u, int sites, int site,
                                     bool allow_large = guard_override_from_env());

}  // namespace obtuse_walks
