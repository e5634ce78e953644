#include "obtuse_walks/walk.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "obtuse_walks/errors.hpp"
#include "obtuse_walks/kernels.hpp"

namespace obtuse_walks {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_form(const ClassicalForm& form) {
  form.system.check_structure();
  if (static_cast<int>(form.w.size()) != form.system.site_dim() || form.w.front().size() == 0) {
    throw MalformedInputError("classical form needs N+1 matrices W_l");
  }
}

WalkSample run_walk(const ClassicalForm& form, int n_steps, std::uint64_t seed) {
  const auto d = form.system_dim();
  WalkSample out;
  out.steps.reserve(static_cast<std::size_t>(n_steps));
  out.final_state = ComplexMatrix::Identity(d, d);
  for (int k = 0; k < n_steps; ++k) {
    const int i = draw_outcome(form.system.probabilities, seed, static_cast<std::uint64_t>(k));
    out.steps.push_back(i);
    out.final_state = form.w[static_cast<std::size_t>(i)] * out.final_state;
  }
  return out;
}

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

}  // namespace

double step_uniform(std::uint64_t seed, std::uint64_t step) {
  const std::uint64_t x = splitmix64(splitmix64(seed) ^ (step * kGolden + 1));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(base_seed + kGolden * (index + 1));
}

int draw_outcome(const RealVector& probabilities, std::uint64_t seed, std::uint64_t step) {
  const double u = step_uniform(seed, step);
  double cumulative = 0.0;
  const auto last = static_cast<int>(probabilities.size()) - 1;
  for (int i = 0; i < last; ++i) {
    cumulative += probabilities(i);
    if (u < cumulative) return i;
  }
  return last;
}

WalkTrajectory simulate(const ClassicalForm& form, int n_steps, std::uint64_t seed) {
  check_form(form);
  if (n_steps < 0) {
    throw DomainError("step count must be non-negative");
  }
  const auto d = form.system_dim();
  WalkTrajectory t;
  t.seed = seed;
  t.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  t.states.push_back(ComplexMatrix::Identity(d, d));
  for (int k = 0; k < n_steps; ++k) {
    const int i = draw_outcome(form.system.probabilities, seed, static_cast<std::uint64_t>(k));
    t.steps.push_back(i);
    t.states.push_back(form.w[static_cast<std::size_t>(i)] * t.states.back());
  }
  return t;
}

std::vector<WalkSample> simulate_batch_serial(const ClassicalForm& form, int n_steps,
                                              std::uint64_t base_seed, std::size_t count) {
  check_form(form);
  std::vector<WalkSample> out(count);
  for (std::size_t t = 0; t < count; ++t) {
    out[t] = run_walk(form, n_steps, trajectory_seed(base_seed, t));
  }
  return out;
}

std::vector<WalkSample> simulate_batch_parallel(const ClassicalForm& form, int n_steps,
                                                std::uint64_t base_seed, std::size_t count) {
  check_form(form);
  std::vector<WalkSample> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < n; ++t) {
    out[static_cast<std::size_t>(t)] =
        run_walk(form, n_steps, trajectory_seed(base_seed, static_cast<std::uint64_t>(t)));
  }
  return out;
}

double WalkDistribution::total_probability() const {
  double sum = 0.0;
  for (const auto& [m, p] : atoms) sum += p;
  return sum;
}

WalkDistribution exact_distribution(const ClassicalForm& form, int n, double merge_tol) {
  check_form(form);
  if (n < 1) {
    throw DomainError("horizon must be positive");
  }
  const int s = form.system.site_dim();
  if (saturating_pow(s, n) > kWordGuard) {
    throw ResourceGuardError("(N+1)^n exceeds 1e6 words; use Monte Carlo (walk simulate) instead");
  }
  const auto d = form.system_dim();
  const RealVector& p = form.system.probabilities;

  WalkDistribution dist;
  dist.horizon = n;
  // Atoms are bucketed by Re V(0,0) on a grid of width merge_tol: two matrices
  // within merge_tol in Frobenius norm land in the same or adjacent buckets.
  const double cell = merge_tol > 0.0 ? merge_tol : 1e-300;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  auto add_atom = [&](const ComplexMatrix& m, double prob) {
    const auto key = static_cast<std::int64_t>(std::floor(m(0, 0).real() / cell));
    std::size_t best = dist.atoms.size();
    for (std::int64_t k = key - 1; k <= key + 1; ++k) {
      const auto it = buckets.find(k);
      if (it == buckets.end()) continue;
      for (std::size_t idx : it->second) {
        if (idx < best && (dist.atoms[idx].first - m).norm() <= merge_tol) best = idx;
      }
    }
    if (best < dist.atoms.size()) {
      dist.atoms[best].second += prob;
    } else {
      buckets[key].push_back(dist.atoms.size());
      dist.atoms.emplace_back(m, prob);
    }
  };

  // Depth-first over words with prefix products: prefix[k] = W_{j_k}...W_{j_1}.
  std::vector<int> word(static_cast<std::size_t>(n), 0);
  std::vector<ComplexMatrix> prefix(static_cast<std::size_t>(n) + 1);
  std::vector<double> weight(static_cast<std::size_t>(n) + 1, 1.0);
  prefix[0] = ComplexMatrix::Identity(d, d);
  int depth = 0;
  for (;;) {
    // Extend from `depth` to a full word.
    for (int k = depth; k < n; ++k) {
      const auto j = static_cast<std::size_t>(word[static_cast<std::size_t>(k)]);
      prefix[k + 1] = form.w[j] * prefix[static_cast<std::size_t>(k)];
      weight[k + 1] = weight[static_cast<std::size_t>(k)] * p(static_cast<Eigen::Index>(j));
    }
    add_atom(prefix[static_cast<std::size_t>(n)], weight[static_cast<std::size_t>(n)]);
    // Lexicographic increment, last step fastest.
    int k = n - 1;
    while (k >= 0 && word[static_cast<std::size_t>(k)] == s - 1) {
      word[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
    ++word[static_cast<std::size_t>(k)];
    depth = k;
  }
  return dist;
}

ComplexMatrix word_product(const ClassicalForm& form, const std::vector<int>& path) {
  const auto d = form.system_dim();
  ComplexMatrix v = ComplexMatrix::Identity(d, d);
  for (int j : path) {
    if (j < 0 || j >= form.system.site_dim()) {
      throw DomainError("path entry out of range");
    }
    v = form.w[static_cast<std::size_t>(j)] * v;
  }
  return v;
}

ComplexMatrix chain_evolution_product(const BlockUnitary& u, int n) {
  const kernels::ChainShape shape{u.system_dim(), u.site_dim(), n};
  const ComplexMatrix local = u.to_dense();
  ComplexMatrix v = ComplexMatrix::Identity(shape.dim(), shape.dim());
  for (int k = 1; k <= n; ++k) {
    kernels::apply_local_parallel(local, shape, k, v);
  }
  return v;
}

ComplexMatrix chain_evolution_recursion(const BlockUnitary& u, int n) {
  const auto d = u.system_dim();
  const auto s = u.site_dim();
  const Eigen::Index chain = ipow(s, n);
  const Eigen::Index dim = d * chain;

  ComplexMatrix v = ComplexMatrix::Identity(dim, dim);
  for (int k = 0; k < n; ++k) {
    // a^i_j(k+1) = |j><i| on site k+1, whose digit has weight s^(n-k-1).
    const Eigen::Index stride = ipow(s, n - k - 1);
    ComplexMatrix next = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < s; ++i) {
      for (Eigen::Index j = 0; j < s; ++j) {
        const ComplexMatrix& coeff = u.block(i, j);
        if (coeff.isZero(0.0)) continue;
        // V a^i_j: column c survives iff its site digit is i, and then
        // reads column c with the digit replaced by j.
        ComplexMatrix right = ComplexMatrix::Zero(dim, dim);
        for (Eigen::Index c = 0; c < dim; ++c) {
          const Eigen::Index digit = (c / stride) % s;
          if (digit != i) continue;
          right.col(c) = v.col(c + (j - i) * stride);
        }
        // (U^i_j ⊗ I) right, one block row of the system leg at a time.
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) {
            if (coeff(a, b) == Complex(0.0)) continue;
            next.middleRows(a * chain, chain) += coeff(a, b) * right.middleRows(b * chain, chain);
          }
      }
    }
    v = std::move(next);
  }
  return v;
}

ChainOperator chain_evolution(const BlockUnitary& u, int n, bool allow_large) {
  u.check_structure();
  if (n < 1) {
    throw DomainError("step count must be positive");
  }
  check_chain_guard(u.system_dim(), u.site_dim(), n, allow_large);
  ComplexMatrix product = chain_evolution_product(u, n);
  const ComplexMatrix recursion = chain_evolution_recursion(u, n);
  const double gap = (product - recursion).norm();
  if (!(gap <= 1e-10)) {
    throw std::logic_error("chain evolution routes disagree: " + std::to_string(gap));
  }
  return {n, u.site_dim(), u.system_dim(), std::move(product)};
}

ComplexMatrix conjugate_to_path_basis(const ComplexMatrix& chain_op, const ObtuseSystem& system,
                                      Eigen::Index system_dim, int n) {
  const ComplexMatrix theta = path_basis_unitary(system);
  const kernels::ChainShape shape{system_dim, theta.rows(), n};
  if (chain_op.rows() != shape.dim() || chain_op.cols() != shape.dim()) {
    throw MalformedInputError("chain operator does not match d*(N+1)^n");
  }
  // S = I_d ⊗ Theta^{⊗n}; apply S* on the left and S on the right site by site.
  const ComplexMatrix local = kernels::kron_parallel(ComplexMatrix::Identity(system_dim, system_dim), theta);
  const ComplexMatrix local_adj = local.adjoint();
  ComplexMatrix c = chain_op;
  for (int k = 1; k <= n; ++k) kernels::apply_local_parallel(local_adj, shape, k, c);
  // c S = (S* c*)*
  ComplexMatrix ct = c.adjoint();
  for (int k = 1; k <= n; ++k) kernels::apply_local_parallel(local_adj, shape, k, ct);
  return ct.adjoint();
}

double path_offdiagonal_mass(const ComplexMatrix& conjugated, Eigen::Index site_dim, int n) {
  const Eigen::Index chain = ipow(site_dim, n);
  double worst = 0.0;
  for (Eigen::Index c = 0; c < conjugated.cols(); ++c) {
    const Eigen::Index path_c = c % chain;
    for (Eigen::Index r = 0; r < conjugated.rows(); ++r) {
      if (r % chain != path_c) worst = std::max(worst, std::abs(conjugated(r, c)));
    }
  }
  return worst;
}

BlockDiagonalizationReport verify_block_diagonalization(const BlockUnitary& u,
                                                        const ClassicalForm& form, int n,
                                                        double tol, bool allow_large) {
  check_form(form);
  if (u.site_dim() != form.system.site_dim() || u.system_dim() != form.system_dim()) {
    throw DomainError("classical form does not match the block unitary");
  }
  const ChainOperator v = chain_evolution(u, n, allow_large);
  const auto d = u.system_dim();
  const auto s = u.site_dim();
  const ComplexMatrix c = conjugate_to_path_basis(v.matrix, form.system, d, n);

  BlockDiagonalizationReport r;
  r.tol = tol;
  r.steps = n;
  const Eigen::Index chain = ipow(s, n);
  r.paths = static_cast<std::size_t>(chain);
  r.off_diagonal = path_offdiagonal_mass(c, s, n);

  std::vector<int> path(static_cast<std::size_t>(n));
  for (Eigen::Index sigma = 0; sigma < chain; ++sigma) {
    Eigen::Index rest = sigma;
    for (int k = n - 1; k >= 0; --k) {
      path[static_cast<std::size_t>(k)] = static_cast<int>(rest % s);
      rest /= s;
    }
    ComplexMatrix block(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) block(a, b) = c(a * chain + sigma, b * chain + sigma);
    r.block_mismatch = std::max(r.block_mismatch, (block - word_product(form, path)).norm());
  }
  return r;
}

}  // namespace obtuse_walks
