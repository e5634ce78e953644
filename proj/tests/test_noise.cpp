#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "obtuse_walks/errors.hpp"
#include "obtuse_walks/noise.hpp"
#include "test_support.hpp"

namespace obtuse_walks {
namespace {

using testing::kron_by_index;

ComplexMatrix real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

TEST(MatrixUnit, SendsBasisVectorIToJ) {
  const auto a = matrix_unit(0, 1, 2);
  EXPECT_EQ(a, real_matrix({{0, 0}, {1, 0}}));
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Unit(2, 0);
  EXPECT_EQ(a * e0, Eigen::VectorXcd::Unit(2, 1));
  EXPECT_TRUE((a * Eigen::VectorXcd::Unit(2, 1)).isZero(0.0));
}

TEST(MatrixUnit, CompositionRule) {
  // a^i_j a^k_l = δ_il a^k_j : apply a^k_l first, then a^i_j.
  const Eigen::Index s = 3;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int k = 0; k < s; ++k)
        for (int l = 0; l < s; ++l) {
          const ComplexMatrix lhs = matrix_unit(i, j, s) * matrix_unit(k, l, s);
          const ComplexMatrix rhs =
              i == l ? matrix_unit(k, j, s) : ComplexMatrix::Zero(s, s).eval();
          EXPECT_EQ(lhs, rhs);
        }
}

TEST(MatrixUnit, OutOfRangeIsDomainError) {
  EXPECT_THROW(matrix_unit(2, 0, 2), DomainError);
  EXPECT_THROW(matrix_unit(0, -1, 2), DomainError);
}

TEST(Ampliate, SecondSiteOfTwo) {
  const auto op = ampliate(matrix_unit(0, 1, 2), 2, 2, 1);
  EXPECT_EQ(op.matrix, kron_by_index(ComplexMatrix::Identity(2, 2), matrix_unit(0, 1, 2)));
  const auto first = ampliate(matrix_unit(0, 1, 2), 1, 2, 1);
  EXPECT_EQ(first.matrix, kron_by_index(matrix_unit(0, 1, 2), ComplexMatrix::Identity(2, 2)));
}

TEST(Ampliate, SystemLegIsSlowest) {
  const auto op = ampliate(matrix_unit(1, 2, 3), 1, 1, 2);
  EXPECT_EQ(op.matrix, kron_by_index(ComplexMatrix::Identity(2, 2), matrix_unit(1, 2, 3)));
  EXPECT_EQ(op.shape().dim(), 6);
}

TEST(Ampliate, DifferentSitesCommute) {
  std::mt19937_64 rng(31);
  const ComplexMatrix a = random_unitary(3, rng);
  const ComplexMatrix b = random_unitary(3, rng);
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) {
      if (p == q) continue;
      const auto x = ampliate(a, p, 3, 2).matrix;
      const auto y = ampliate(b, q, 3, 2).matrix;
      EXPECT_LE((x * y - y * x).norm(), 1e-12) << p << " " << q;
    }
}

TEST(Ampliate, SameSiteNeedNotCommute) {
  const auto x = ampliate(matrix_unit(0, 1, 2), 1, 2, 1).matrix;
  const auto y = ampliate(matrix_unit(1, 0, 2), 1, 2, 1).matrix;
  EXPECT_GT((x * y - y * x).norm(), 0.5);
}

TEST(Ampliate, GuardTripsAboveLimit) {
  // 17 * 4^5 = 17408 > 16384.
  EXPECT_THROW(check_chain_guard(17, 4, 5, false), ResourceGuardError);
  EXPECT_NO_THROW(check_chain_guard(16, 4, 5, false));
  EXPECT_NO_THROW(check_chain_guard(17, 4, 5, true));
  EXPECT_THROW(check_chain_guard(2, 10, 400, false), ResourceGuardError);  // no overflow
  EXPECT_THROW(ampliate(ComplexMatrix::Identity(4, 4), 1, 5, 17, false), ResourceGuardError);
}

TEST(MultiplicationOperator, BernoulliIsTwoByTwo) {
  for (double p : {0.1, 0.25, 0.5, 0.8}) {
    const double q = 1.0 - p;
    const auto x = generate_obtuse(1, std::vector<double>{p, q}, 0);
    const auto m = multiplication_operator(x, compute_tensor(x), 1);
    const double cp = (q - p) / std::sqrt(p * q);
    EXPECT_LE((m - real_matrix({{0, 1}, {1, cp}})).norm(), 1e-12) << p;

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m);
    const double lo = std::min(x.values(0, 0), x.values(0, 1));
    const double hi = std::max(x.values(0, 0), x.values(0, 1));
    EXPECT_NEAR(eig.eigenvalues()(0), lo, 1e-12);
    EXPECT_NEAR(eig.eigenvalues()(1), hi, 1e-12);
  }
}

TEST(MultiplicationOperator, ZeroCoordinateIsIdentity) {
  const auto x = testing::example_n2();
  EXPECT_EQ(multiplication_operator(x, compute_tensor(x), 0), ComplexMatrix::Identity(3, 3));
}

TEST(PathBasis, QuarterBernoulliTheta) {
  const auto x = generate_obtuse(1, std::vector<double>{0.25, 0.75}, 0);
  const ComplexMatrix theta = path_basis_unitary(x);
  const double h = std::sqrt(3.0) / 2.0;
  EXPECT_LE((theta - real_matrix({{0.5, h}, {h, -0.5}})).norm(), 1e-14);
}

TEST(NoiseProperty, AlgebraOfMultiplicationOperators) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 5);
    const auto x = generate_obtuse(dim, std::nullopt, seed);
    const auto t = compute_tensor(x);
    std::vector<ComplexMatrix> m;
    for (int i = 0; i <= dim; ++i) m.push_back(multiplication_operator(x, t, i));

    const ComplexMatrix theta = path_basis_unitary(x);
    EXPECT_LE(two_sided_unitarity_residual(theta), 1e-10);
    for (int i = 0; i <= dim; ++i) {
      EXPECT_LE((m[i] - m[i].adjoint()).norm(), 1e-14);
      // Θ* M_i Θ = diag(v_0^i, ..., v_N^i)
      const ComplexMatrix diag = theta.adjoint() * m[i] * theta;
      for (int r = 0; r <= dim; ++r)
        for (int c = 0; c <= dim; ++c) {
          const double expected = r != c ? 0.0 : (i == 0 ? 1.0 : x.values(i - 1, r));
          EXPECT_NEAR(diag(r, c).real(), expected, 1e-10);
          EXPECT_NEAR(diag(r, c).imag(), 0.0, 1e-12);
        }
      for (int j = 0; j <= dim; ++j) {
        EXPECT_LE((m[i] * m[j] - m[j] * m[i]).norm(), 1e-10);
        ComplexMatrix rhs = ComplexMatrix::Zero(dim + 1, dim + 1);
        for (int k = 0; k <= dim; ++k) rhs += t(i, j, k) * m[k];
        EXPECT_LE((m[i] * m[j] - rhs).norm(), 1e-10) << seed << " " << i << " " << j;
      }
    }
  }
}

TEST(NoiseProperty, SpectrumIsTheValueSet) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 4);
    const auto x = generate_obtuse(dim, std::nullopt, seed + 500);
    const auto t = compute_tensor(x);
    for (int i = 1; i <= dim; ++i) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(multiplication_operator(x, t, i));
      std::vector<double> values;
      for (int l = 0; l <= dim; ++l) values.push_back(x.values(i - 1, l));
      std::sort(values.begin(), values.end());
      for (int l = 0; l <= dim; ++l) EXPECT_NEAR(eig.eigenvalues()(l), values[l], 1e-9);
    }
  }
}

TEST(GuardOverride, ReadsEnvironment) {
  ::setenv("OBTUSE_WALKS_GUARD_OVERRIDE", "1", 1);
  EXPECT_TRUE(guard_override_from_env());
  ::setenv("OBTUSE_WALKS_GUARD_OVERRIDE", "0", 1);
  EXPECT_FALSE(guard_override_from_env());
  ::unsetenv("OBTUSE_WALKS_GUARD_OVERRIDE");
  EXPECT_FALSE(guard_override_from_env());
}

}  // namespace
}  // namespace obtuse_walks
