#pragma once

// Dense kernels on the truncated chain H_0 ⊗ (C^s)^{⊗n}, H_0 the slowest leg
// and site n the fastest. Each kernel has a serial reference and an OpenMP
// version; they must agree to rounding and the tests hold them to it.

#include "obtuse_walks/linalg.hpp"

namespace obtuse_walks::kernels {

/// Leg layout of a chain space: system dimension, site dimension, site count.
struct ChainShape {
  Eigen::Index system_dim = 1;
  Eigen::Index site_dim = 2;
  int sites = 1;

  Eigen::Index dim() const;
};

ComplexMatrix kron_serial(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_parallel(const ComplexMatrix& a, const ComplexMatrix& b);

/// Dense embedding of an operator acting on (H_0, site `site`) into the whole
/// chain. `local` is (d*s) x (d*s) in the H_0-major ordering. Sites are
/// numbered 1..n.
ComplexMatrix embed_local(const ComplexMatrix& local, const ChainShape& shape, int site);

/// target <- embed_local(local, shape, site) * target, by a full dense product.
void apply_local_serial(const ComplexMatrix& local, const ChainShape& shape, int site,
                        ComplexMatrix& target);

/// Same result as apply_local_serial without materializing the embedding:
/// each column of target is updated in (d*s)-sized gathers, columns in parallel.
void apply_local_parallel(const ComplexMatrix& local, const ChainShape& shape, int site,
                          ComplexMatrix& target);

}  // namespace obtuse_walks::kernels
