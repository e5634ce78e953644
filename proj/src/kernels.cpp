#include "obtuse_walks/kernels.hpp"

#include <vector>

#include "obtuse_walks/errors.hpp"

namespace obtuse_walks::kernels {

namespace {

Eigen::Index ipow(Eigen::Index base, int exp) {
  Eigen::Index out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

void check_local(const ComplexMatrix& local, const ChainShape& shape, int site) {
  const auto ls = shape.system_dim * shape.site_dim;
  if (local.rows() != ls || local.cols() != ls) {
    throw MalformedInputError("local operator must be (d*s) x (d*s)");
  }
  if (site < 1 || site > shape.sites) {
    throw DomainError("site index out of range");
  }
}

}  // namespace

Eigen::Index ChainShape::dim() const { return system_dim * ipow(site_dim, sites); }

ComplexMatrix kron_serial(const ComplexMatrix& a, const ComplexMatrix& b) { return kron(a, b); }

ComplexMatrix kron_parallel(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  const Eigen::Index rows = a.rows() * br;
  const Eigen::Index cols = a.cols() * bc;
  ComplexMatrix out(rows, cols);
  // Column-major storage: parallelize over output columns.
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Eigen::Index ja = c / bc;
    const Eigen::Index jb = c % bc;
    for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
      const Complex s = a(ia, ja);
      for (Eigen::Index ib = 0; ib < br; ++ib) {
        out(ia * br + ib, c) = s * b(ib, jb);
      }
    }
  }
  return out;
}

ComplexMatrix embed_local(const ComplexMatrix& local, const ChainShape& shape, int site) {
  check_local(local, shape, site);
  const auto d = shape.system_dim;
  const auto s = shape.site_dim;
  const ComplexMatrix before = ComplexMatrix::Identity(ipow(s, site - 1), ipow(s, site - 1));
  const ComplexMatrix after =
      ComplexMatrix::Identity(ipow(s, shape.sites - site), ipow(s, shape.sites - site));

  ComplexMatrix out = ComplexMatrix::Zero(shape.dim(), shape.dim());
  for (Eigen::Index in = 0; in < s; ++in) {
    for (Eigen::Index to = 0; to < s; ++to) {
      ComplexMatrix block(d, d);
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) block(r, c) = local(r * s + to, c * s + in);
      if (block.isZero(0.0)) continue;
      ComplexMatrix unit = ComplexMatrix::Zero(s, s);
      unit(to, in) = 1.0;
      out += kron_serial(block, kron_serial(before, kron_serial(unit, after)));
    }
  }
  return out;
}

void apply_local_serial(const ComplexMatrix& local, const ChainShape& shape, int site,
                        ComplexMatrix& target) {
  if (target.rows() != shape.dim()) {
    throw MalformedInputError("target rows do not match the chain dimension");
  }
  target = embed_local(local, shape, site) * target;
}

void apply_local_parallel(const ComplexMatrix& local, const ChainShape& shape, int site,
                          ComplexMatrix& target) {
  check_local(local, shape, site);
  if (target.rows() != shape.dim()) {
    throw MalformedInputError("target rows do not match the chain dimension");
  }
  const Eigen::Index d = shape.system_dim;
  const Eigen::Index s = shape.site_dim;
  const Eigen::Index stride = ipow(s, shape.sites - site);  // weight of the site digit
  const Eigen::Index block = ipow(s, shape.sites);          // weight of the system digit
  const Eigen::Index high = ipow(s, site - 1);
  const Eigen::Index groups = high * stride;
  const Eigen::Index cols = target.cols();
  const Eigen::Index ls = d * s;

#pragma omp parallel
  {
    Eigen::VectorXcd gathered(ls);
    Eigen::VectorXcd mapped(ls);
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(ls));
#pragma omp for collapse(2) schedule(static)
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index g = 0; g < groups; ++g) {
        const Eigen::Index hi = g / stride;
        const Eigen::Index lo = g % stride;
        const Eigen::Index base = hi * s * stride + lo;
        for (Eigen::Index a = 0; a < d; ++a) {
          for (Eigen::Index j = 0; j < s; ++j) {
            const auto r = a * block + base + j * stride;
            rows[static_cast<std::size_t>(a * s + j)] = r;
            gathered(a * s + j) = target(r, c);
          }
        }
        mapped.noalias() = local * gathered;
        for (Eigen::Index t = 0; t < ls; ++t) {
          target(rows[static_cast<std::size_t>(t)], c) = mapped(t);
        }
      }
    }
  }
}

}  // namespace obtuse_walks::kernels
