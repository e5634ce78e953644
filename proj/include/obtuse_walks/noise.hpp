#pragma once

#include "obtuse_walks/kernels.hpp"
#include "obtuse_walks/linalg.hpp"
#include "obtuse_walks/obtuse.hpp"
#include "obtuse_walks/tensor3.hpp"

namespace obtuse_walks {

/// Largest chain dimension d*(N+1)^n materialized without an override.
inline constexpr Eigen::Index kChainDimGuard = 16384;

/// True when OBTUSE_WALKS_GUARD_OVERRIDE=1 is set in the environment.
bool guard_override_from_env();

/// Throws ResourceGuardError when d*(N+1)^n exceeds kChainDimGuard and
/// `allow_large` is false. Computed without overflow.
void check_chain_guard(Eigen::Index system_dim, Eigen::Index site_dim, int sites, bool allow_large);

/// A dense operator on H_0 ⊗ (C^{N+1})^{⊗n}, legs ordered (H_0, site 1, ..., site n).
struct ChainOperator {
  int sites = 0;
  Eigen::Index site_dim = 0;
  Eigen::Index system_dim = 0;
  ComplexMatrix matrix;

  kernels::ChainShape shape() const { return {system_dim, site_dim, sites}; }
};

/// The quantum noise a^i_j on C^{N+1}: sends basis vector X^i to X^j and
/// every other basis vector to zero. As a matrix, entry (j, i) is one.
///
/// Note the orientation: this is |j><i|, not |i><j|.
ComplexMatrix matrix_unit(int i, int j, Eigen::Index site_dim);

/// I_d ⊗ I ⊗ ... ⊗ op (site p) ⊗ ... ⊗ I, sites numbered 1..n.
ChainOperator ampliate(const ComplexMatrix& op, int site, int sites, Eigen::Index system_dim,
                       bool allow_large = guard_override_from_env());

/// Multiplication by the coordinate X^i, written in the basis X^0, ..., X^N:
/// a^0_i + a^i_0 + sum_{j,l >= 1} T_i^{jl} a^j_l. Real symmetric.
/// For i = 0 this is the identity (X^0 is the constant one).
ComplexMatrix multiplication_operator(const ObtuseSystem& system, const ThreeTensor& tensor,
                                      int coordinate);

/// Theta(i, l) = sqrt(p_l) v_l^i. Real orthogonal, and Theta^T M_i Theta is
/// diag(v_0^i, ..., v_N^i) for every coordinate i: column l of Theta is the
/// normalized indicator of sample point l.
ComplexMatrix path_basis_unitary(const ObtuseSystem& system, double tol = kDefaultTol);

}  // namespace obtuse_walks
