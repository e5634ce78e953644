#include "obtuse_walks/linalg.hpp"

#include <limits>

namespace obtuse_walks {

double unitarity_residual(const ComplexMatrix& a) {
  const auto n = a.cols();
  return (a.adjoint() * a - ComplexMatrix::Identity(n, n)).norm();
}

double two_sided_unitarity_residual(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  const auto n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return std::max((a.adjoint() * a - id).norm(), (a * a.adjoint() - id).norm());
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  return two_sided_unitarity_residual(a) <= tol;
}

ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix z(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) {
      q.col(k) *= r(k, k) / mag;
    }
  }
  return q;
}

RealMatrix random_special_orthogonal(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RealMatrix z(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      z(r, c) = gauss(rng);
    }
  }
  Eigen::HouseholderQR<RealMatrix> qr(z);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (r(k, k) < 0.0) {
      q.col(k) *= -1.0;
    }
  }
  if (dim > 0 && q.determinant() < 0.0) {
    q.col(0) *= -1.0;
  }
  return q;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) {
    out = kron(out, f);
  }
  return out;
}

std::int64_t saturating_pow(std::int64_t base, int exponent) {
  std::int64_t out = 1;
  for (int k = 0; k < exponent; ++k) {
    if (base != 0 && out > std::numeric_limits<std::int64_t>::max() / base) {
      return std::numeric_limits<std::int64_t>::max();
    }
    out *= base;
  }
  return out;
}

}  // namespace obtuse_walks
