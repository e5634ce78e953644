#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>

namespace obtuse_walks {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-10;

/// ||A* A - I||_F. Scale-free unitarity defect used throughout.
double unitarity_residual(const ComplexMatrix& a);

/// max(||A* A - I||_F, ||A A* - I||_F).
double two_sided_unitarity_residual(const ComplexMatrix& a);

bool is_unitary(const ComplexMatrix& a, double tol);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out.
ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);

/// Haar-distributed real orthogonal matrix with determinant +1.
RealMatrix random_special_orthogonal(Eigen::Index dim, std::mt19937_64& rng);

/// Kronecker product a ⊗ b, a as the slow (outer) index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product of a list, first factor slowest.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

/// Integer power with overflow saturation at INT64_MAX.
std::int64_t saturating_pow(std::int64_t base, int exponent);

}  // namespace obtuse_walks
