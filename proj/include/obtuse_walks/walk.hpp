#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "obtuse_walks/classicality.hpp"

namespace obtuse_walks {

/// Largest number of words (N+1)^n that exact_distribution will enumerate.
inline constexpr std::int64_t kWordGuard = 1'000'000;

/// Counter-based randomness: the draw at `step` of a walk with `seed` depends
/// only on (seed, step). Uniform on [0, 1).
double step_uniform(std::uint64_t seed, std::uint64_t step);

/// Seed of trajectory `index` in a batch started from `base_seed`.
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index);

/// Outcome index drawn from `probabilities` for the given step.
int draw_outcome(const RealVector& probabilities, std::uint64_t seed, std::uint64_t step);

struct WalkTrajectory {
  std::uint64_t seed = 0;
  std::vector<int> steps;             // outcome of step 1..n
  std::vector<ComplexMatrix> states;  // V_0 = I, ..., V_n
};

/// V_0 = I and V_{k+1} = W_i V_k with probability p_i.
WalkTrajectory simulate(const ClassicalForm& form, int n_steps, std::uint64_t seed);

/// One Monte Carlo sample: the outcomes and the final state only.
struct WalkSample {
  std::vector<int> steps;
  ComplexMatrix final_state;
};

/// `count` independent walks, walk t seeded with trajectory_seed(base_seed, t).
std::vector<WalkSample> simulate_batch_serial(const ClassicalForm& form, int n_steps,
                                              std::uint64_t base_seed, std::size_t count);
/// Same samples as simulate_batch_serial, trajectories spread over OpenMP threads.
std::vector<WalkSample> simulate_batch_parallel(const ClassicalForm& form, int n_steps,
                                                std::uint64_t base_seed, std::size_t count);

struct WalkDistribution {
  int horizon = 0;
  std::vector<std::pair<ComplexMatrix, double>> atoms;

  double total_probability() const;
};

/// Law of V_n by enumerating all (N+1)^n words in lexicographic order
/// (step 1 slowest). Products within `merge_tol` (Frobenius) of an earlier
/// atom are folded into it.
WalkDistribution exact_distribution(const ClassicalForm& form, int n, double merge_tol = 1e-9);

/// W_{j_n} ... W_{j_1} for the path (j_1, ..., j_n).
ComplexMatrix word_product(const ClassicalForm& form, const std::vector<int>& path);

/// V_n = U_n ... U_1 on the n-site chain, each U_k applied in place by the
/// parallel local kernel.
ComplexMatrix chain_evolution_product(const BlockUnitary& u, int n);

/// V_{k+1} = sum_{i,j} U^i_j V_k a^i_j(k+1), using that V_k commutes with the
/// noises of site k+1.
ComplexMatrix chain_evolution_recursion(const BlockUnitary& u, int n);

/// Both constructions above; throws std::logic_error if they differ by more
/// than 1e-10 (Frobenius). Returns the product form.
ChainOperator chain_evolution(const BlockUnitary& u, int n,
                              bool allow_large = guard_override_from_env());

/// S* V S with S = I_d ⊗ Theta^{⊗n}.
ComplexMatrix conjugate_to_path_basis(const ComplexMatrix& chain_op, const ObtuseSystem& system,
                                      Eigen::Index system_dim, int n);

/// Largest entry of a path-basis operator coupling two different paths.
double path_offdiagonal_mass(const ComplexMatrix& conjugated, Eigen::Index site_dim, int n);

struct BlockDiagonalizationReport {
  double tol = 1e-9;
  int steps = 0;
  std::size_t paths = 0;
  double off_diagonal = 0.0;    // max |C(r, c)| across different paths
  double block_mismatch = 0.0;  // max_σ ||C_σσ - W_{j_n}...W_{j_1}||_F

  bool passed() const { return off_diagonal <= tol && block_mismatch <= tol; }
};

/// Conjugates the chain evolution of u into the path basis and compares it
/// with the direct sum of word products. `form` must be the classical form of u.
BlockDiagonalizationReport verify_block_diagonalization(const BlockUnitary& u,
                                                        const ClassicalForm& form, int n,
                                                        double tol = 1e-9,
                                                        bool allow_large = guard_override_from_env());

}  // namespace obtuse_walks
