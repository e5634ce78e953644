#include <gtest/gtest.h>

#include "obtuse_walks/linalg.hpp"
#include "test_support.hpp"

namespace obtuse_walks {
namespace {

TEST(Linalg, RandomUnitaryIsUnitary) {
  std::mt19937_64 rng(3);
  for (int d = 1; d <= 6; ++d) {
    EXPECT_LE(two_sided_unitarity_residual(random_unitary(d, rng)), 1e-13) << d;
  }
}

TEST(Linalg, RandomUnitaryDeterministicPerSeed) {
  std::mt19937_64 a(11);
  std::mt19937_64 b(11);
  EXPECT_EQ(random_unitary(4, a), random_unitary(4, b));
}

TEST(Linalg, SpecialOrthogonalHasUnitDeterminant) {
  std::mt19937_64 rng(5);
  for (int d = 1; d <= 6; ++d) {
    const RealMatrix q = random_special_orthogonal(d, rng);
    EXPECT_NEAR(q.determinant(), 1.0, 1e-12);
    EXPECT_LE((q.transpose() * q - RealMatrix::Identity(d, d)).norm(), 1e-13);
  }
}

TEST(Linalg, KronMatchesIndexFormula) {
  std::mt19937_64 rng(1);
  const ComplexMatrix a = ComplexMatrix::Random(2, 3);
  const ComplexMatrix b = ComplexMatrix::Random(3, 2);
  EXPECT_EQ(kron(a, b), testing::kron_by_index(a, b));
}

TEST(Linalg, NonSquareIsNotUnitary) {
  EXPECT_FALSE(is_unitary(ComplexMatrix::Identity(2, 3), 1e-3));
}

TEST(Linalg, SaturatingPow) {
  EXPECT_EQ(saturating_pow(3, 4), 81);
  EXPECT_EQ(saturating_pow(2, 0), 1);
  EXPECT_EQ(saturating_pow(10, 40), std::numeric_limits<std::int64_t>::max());
}

}  // namespace
}  // namespace obtuse_walks
