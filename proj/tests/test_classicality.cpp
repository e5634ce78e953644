#include <gtest/gtest.h>

#include <cmath>

#include "obtuse_walks/classicality.hpp"
#include "obtuse_walks/errors.hpp"
#include "test_support.hpp"

namespace obtuse_walks {
namespace {

using testing::random_unitaries;

double max_block_gap(const BlockUnitary& a, const BlockUnitary& b) {
  double gap = 0.0;
  for (Eigen::Index i = 0; i < a.site_dim(); ++i)
    for (Eigen::Index j = 0; j < a.site_dim(); ++j)
      gap = std::max(gap, (a.block(i, j) - b.block(i, j)).norm());
  return gap;
}

TEST(BuildU, IdenticalWsGiveIdentity) {
  const auto x = testing::example_n2();
  std::mt19937_64 rng(1);
  const ComplexMatrix v = random_unitary(2, rng);
  const auto u = build_u({v, v, v}, x);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const ComplexMatrix expected = i == j ? v : ComplexMatrix::Zero(2, 2).eval();
      EXPECT_LE((u.block(i, j) - expected).norm(), 1e-14);
    }
}

TEST(BuildU, ScalarSignWalk) {
  // W_0 = 1, W_1 = -1 on the symmetric coin: U = [[0, 1], [1, 0]] in block form.
  ComplexMatrix one = ComplexMatrix::Identity(1, 1);
  const auto u = build_u({one, -one}, testing::symmetric_bernoulli());
  ComplexMatrix expected(2, 2);
  expected << 0.0, 1.0, 1.0, 0.0;
  EXPECT_LE((u.to_block_matrix() - expected).norm(), 1e-15);
}

TEST(BuildU, NonUnitaryWIsNamed) {
  std::mt19937_64 rng(2);
  auto w = random_unitaries(3, 2, rng);
  w[1] *= 1.01;
  try {
    build_u(w, testing::example_n2());
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("W_1"), std::string::npos);
  }
}

TEST(BuildU, WrongCountIsDomainError) {
  std::mt19937_64 rng(3);
  EXPECT_THROW(build_u(random_unitaries(2, 2, rng), testing::example_n2()), DomainError);
}

TEST(BuildU, DenseAndBlockLayoutsAgree) {
  std::mt19937_64 rng(4);
  const auto x = generate_obtuse(2, std::nullopt, 4);
  const auto u = build_u(random_unitaries(3, 2, rng), x);
  const auto back = BlockUnitary::from_dense(u.to_dense(), 2, 3);
  EXPECT_EQ(max_block_gap(u, back), 0.0);
  // The two layouts differ by a permutation, so both are unitary together.
  EXPECT_LE(two_sided_unitarity_residual(u.to_block_matrix()), 1e-12);
  EXPECT_LE(u.unitarity_residual(), 1e-12);
}

TEST(BuildU, BernoulliClosedFormMatchesGeneric) {
  std::mt19937_64 rng(5);
  for (double p : {0.1, 0.25, 0.5, 0.77}) {
    const auto w = random_unitaries(2, 3, rng);
    const auto x = generate_obtuse(1, std::vector<double>{p, 1.0 - p}, 0);
    const auto generic = build_u(w, x);
    const auto closed = build_u_bernoulli(w[0], w[1], p);
    EXPECT_LE(max_block_gap(generic, closed), 1e-12) << p;

    const auto form = make_classical_form(w, x);
    EXPECT_LE((form.b[0] - closed.block(0, 0)).norm(), 1e-12);
    EXPECT_LE((form.b[1] - closed.block(0, 1)).norm(), 1e-12);
    EXPECT_LE((form.b[1] - closed.block(1, 0)).norm(), 1e-12);
  }
  EXPECT_THROW(build_u_bernoulli(ComplexMatrix::Identity(1, 1), ComplexMatrix::Identity(1, 1), 1.0),
               DomainError);
}

TEST(ClassicalForm, BIdentities) {
  // B_i = U^i_0 = U^0_i, sum_i v_l^i B_i = W_l, and sum_l p_l W_l = B_0.
  std::mt19937_64 rng(6);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 4);
    const auto x = generate_obtuse(dim, std::nullopt, seed);
    const auto w = random_unitaries(static_cast<std::size_t>(dim) + 1, 2, rng);
    const auto u = build_u(w, x);
    const auto form = make_classical_form(w, x);
    const RealMatrix e = x.extended_values();
    ComplexMatrix mean = ComplexMatrix::Zero(2, 2);
    for (int l = 0; l <= dim; ++l) mean += x.probabilities(l) * w[l];
    EXPECT_LE((mean - form.b[0]).norm(), 1e-12);
    for (int i = 0; i <= dim; ++i) {
      EXPECT_LE((u.block(i, 0) - form.b[i]).norm(), 1e-12);
      EXPECT_LE((u.block(0, i) - form.b[i]).norm(), 1e-12);
    }
    for (int l = 0; l <= dim; ++l) {
      ComplexMatrix rebuilt = ComplexMatrix::Zero(2, 2);
      for (int i = 0; i <= dim; ++i) rebuilt += e(i, l) * form.b[i];
      EXPECT_LE((rebuilt - w[l]).norm(), 1e-10);
    }
  }
}

TEST(DetectClassical, RoundTripRecoversW) {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 4);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(seed % 3);
    const auto x = generate_obtuse(dim, std::nullopt, seed);
    const auto w = random_unitaries(static_cast<std::size_t>(dim) + 1, d, rng);
    const auto report = detect_classical(build_u(w, x), x);
    ASSERT_TRUE(report.accepted) << seed << " " << report.failed_check;
    ASSERT_TRUE(report.form.has_value());
    for (int l = 0; l <= dim; ++l) EXPECT_LE((report.form->w[l] - w[l]).norm(), 1e-9) << seed;
  }
}

TEST(DetectClassical, PerturbedInstancesRejected) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 3);
    const auto x = generate_obtuse(dim, std::nullopt, seed);
    const auto w = random_unitaries(static_cast<std::size_t>(dim) + 1, 2, rng);
    const ComplexMatrix dense = build_u(w, x).to_dense();
    // A random unitary rotation close to the identity keeps U unitary but moves it off the form.
    ComplexMatrix h = ComplexMatrix::Zero(dense.rows(), dense.cols());
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      for (Eigen::Index c = 0; c < h.cols(); ++c) h(r, c) = Complex(gauss(rng), gauss(rng));
    const ComplexMatrix herm = 1e-3 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm);
    const Eigen::VectorXcd phases =
        (Complex(0.0, 1.0) * eig.eigenvalues().cast<Complex>()).array().exp().matrix();
    const ComplexMatrix kick = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
    const auto perturbed = BlockUnitary::from_dense(kick * dense, 2, dim + 1);
    const auto report = detect_classical(perturbed, x);
    EXPECT_FALSE(report.accepted) << seed;
    EXPECT_LE(report.input_unitarity, 1e-10);
  }
}

TEST(DetectClassical, UnitaryButNotClassical) {
  // A rotation between the two coin levels: unitary, but U^0_1 = -U^1_0 breaks
  // the symmetry every classical U has.
  const double theta = 0.3;
  BlockUnitary u(2, 2);
  u.block(0, 0) = std::cos(theta) * ComplexMatrix::Identity(2, 2);
  u.block(1, 1) = std::cos(theta) * ComplexMatrix::Identity(2, 2);
  u.block(0, 1) = std::sin(theta) * ComplexMatrix::Identity(2, 2);
  u.block(1, 0) = -std::sin(theta) * ComplexMatrix::Identity(2, 2);
  ASSERT_LE(u.unitarity_residual(), 1e-14);
  const auto report = detect_classical(u, testing::symmetric_bernoulli());
  EXPECT_FALSE(report.accepted);
  EXPECT_EQ(report.failed_check, "coefficients");
  EXPECT_NEAR(report.coefficient_residual, 2.0 * std::sin(theta) * std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(report.form.has_value());
}

TEST(DetectClassical, NonUnitaryInputIsARejection) {
  BlockUnitary u(1, 2);
  u.block(0, 0) = 2.0 * ComplexMatrix::Identity(1, 1);
  const auto report = detect_classical(u, testing::symmetric_bernoulli());
  EXPECT_FALSE(report.accepted);
  EXPECT_EQ(report.failed_check, "input_unitarity");
}

TEST(DetectClassical, ClassicalShapeWithNonUnitaryWFailsB) {
  // Blocks built from W's that are not unitary: (a) holds, (b) does not. The
  // dense U is then not unitary either, so compare the residuals directly.
  const auto x = testing::symmetric_bernoulli();
  BlockUnitary u(1, 2);
  u.block(0, 0) = ComplexMatrix::Constant(1, 1, 0.5);
  u.block(1, 1) = ComplexMatrix::Constant(1, 1, 0.5);
  const auto report = detect_classical(u, x);
  EXPECT_LE(report.coefficient_residual, 1e-15);
  EXPECT_NEAR(report.w_unitarity_residual, 0.75, 1e-15);
  EXPECT_FALSE(report.accepted);
}

TEST(DetectClassical, SiteDimensionMismatchThrows) {
  BlockUnitary u(1, 3);
  EXPECT_THROW(detect_classical(u, testing::symmetric_bernoulli()), DomainError);
}

TEST(StepOperator, ClassicalSumEqualsAmpliatedU) {
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 2);
    const auto x = generate_obtuse(dim, std::nullopt, seed);
    const auto w = random_unitaries(static_cast<std::size_t>(dim) + 1, 2, rng);
    const auto u = build_u(w, x);
    const auto form = make_classical_form(w, x);
    for (int site = 1; site <= 2; ++site) {
      const auto a = classical_step_operator(form, 2, site);
      const auto b = ampliate_block_unitary(u, 2, site);
      EXPECT_LE((a.matrix - b.matrix).norm(), 1e-12) << seed << " " << site;
      EXPECT_LE(two_sided_unitarity_residual(b.matrix), 1e-12);
    }
  }
}

}  // namespace
}  // namespace obtuse_walks
