#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "obtuse_walks/linalg.hpp"

namespace obtuse_walks {

/// Probabilities below this are rejected by generate_obtuse: p = 1/(1+|v|^2)
/// makes the value vectors blow up as p -> 0.
inline constexpr double kProbabilityFloor = 1e-8;

/// A random variable X in R^N taking N+1 values.
///
/// `values` is N x (N+1); column l is the value vector v_l, taken with
/// probability `probabilities[l]`. Index 0 of the extended coordinate
/// system is the constant-one coordinate X^0.
struct ObtuseSystem {
  int dim = 0;
  RealMatrix values;
  RealVector probabilities;

  /// Throws MalformedInputError unless dim >= 1 and the shapes are
  /// N x (N+1) and N+1. Says nothing about obtuseness.
  void check_structure() const;

  /// (N+1) x (N+1) table E with E(i, l) = v_l^i and E(0, l) = 1.
  RealMatrix extended_values() const;

  /// Theta(i, l) = sqrt(p_l) * v_l^i with the extended convention.
  RealMatrix scaled_value_matrix() const;

  int site_dim() const { return dim + 1; }
};

/// Residuals for the three equivalent characterizations of an obtuse
/// random variable. All are absolute.
struct ObtuseValidation {
  double tol = kDefaultTol;

  double probability_sum = 0.0;       // |sum p - 1|
  bool probabilities_in_range = true;  // 0 < p_i < 1

  // (1) centered and normalized
  double mean = 0.0;        // max_i |sum_l p_l v_l^i|
  double covariance = 0.0;  // ||sum_l p_l v_l v_l^T - I||_F

  // (2) obtuse value system
  double inner_product = 0.0;  // max_{i != j} |<v_i, v_j> + 1|
  double probability = 0.0;    // max_i |p_i (1 + |v_i|^2) - 1|

  // (3) ||Theta Theta^T - I||_F
  double unitarity = 0.0;

  bool centered_normalized_ok() const;
  bool obtuse_values_ok() const;
  bool unitary_ok() const;
  bool passed() const;
};

ObtuseValidation validate_obtuse(const ObtuseSystem& candidate, double tol = kDefaultTol);

/// Builds an obtuse system with the given law, or a flat-Dirichlet law when
/// `probabilities` is empty.
///
/// The first row of an orthogonal matrix is fixed to (sqrt p_0, ..., sqrt p_N)
/// with a Householder reflection; the remaining rows are rotated by a seeded
/// Haar element of SO(N). The result is therefore one representative of an
/// SO(N) orbit, not a canonical form. For N = 1 the rotation is trivial and
/// v_0 = sqrt(q/p), v_1 = -sqrt(p/q).
ObtuseSystem generate_obtuse(int dim, const std::optional<std::vector<double>>& probabilities,
                             std::uint64_t seed);

/// A finitely supported random variable Y in R^target_dim taking k >= 2
/// distinct values (columns of `values`).
struct GeneralRandomVariable {
  int target_dim = 0;
  RealMatrix values;  // target_dim x k
  RealVector probabilities;

  void check_structure() const;
  int support_size() const { return static_cast<int>(values.cols()); }
};

struct GeneralDecomposition {
  ObtuseSystem basis;      // obtuse system in R^{k-1} with Y's law
  RealMatrix coefficients;  // target_dim x k, alpha(i, j) = E[Y^i X^j]
};

/// Expands the coordinates of Y over the orthonormal basis X^0, ..., X^{k-1}
/// of a freshly generated obtuse system sharing Y's probabilities.
GeneralDecomposition decompose_general(const GeneralRandomVariable& y, std::uint64_t seed = 0);

/// Same expansion against a caller-supplied obtuse system. The system must
/// have dim = k - 1 and the same probabilities as Y (sample point l of Y is
/// identified with sample point l of the basis).
GeneralDecomposition decompose_general(const GeneralRandomVariable& y, const ObtuseSystem& basis);

/// Y^i(l) = sum_j alpha(i, j) X^j(l); returns target_dim x k.
RealMatrix reconstruct_values(const GeneralDecomposition& d);

}  // namespace obtuse_walks
