#include "obtuse_walks/obtuse.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "obtuse_walks/errors.hpp"

namespace obtuse_walks {

namespace {

constexpr double kProbabilitySumTol = 1e-9;

void check_law(const std::vector<double>& p, std::size_t expected) {
  if (p.size() != expected) {
    std::ostringstream msg;
    msg << "expected " << expected << " probabilities, got " << p.size();
    throw DomainError(msg.str());
  }
  double sum = 0.0;
  for (double pi : p) {
    if (!(pi > 0.0 && pi < 1.0) || !std::isfinite(pi)) {
      throw DomainError("probabilities must lie in (0,1)");
    }
    if (pi < kProbabilityFloor) {
      throw DomainError("probability below the 1e-8 floor");
    }
    sum += pi;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTol) {
    throw DomainError("probabilities must sum to 1");
  }
}

std::vector<double> flat_dirichlet(std::size_t count, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  for (;;) {
    std::vector<double> p(count);
    double sum = 0.0;
    for (auto& x : p) {
      x = expo(rng);
      sum += x;
    }
    bool ok = true;
    for (auto& x : p) {
      x /= sum;
      ok = ok && x >= kProbabilityFloor;
    }
    if (ok) {
      return p;
    }
  }
}

void check_distinct(const GeneralRandomVariable& y) {
  const auto k = y.support_size();
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (y.values.col(a) == y.values.col(b)) {
        throw DomainError("general random variable has duplicate values");
      }
    }
  }
}

}  // namespace

void ObtuseSystem::check_structure() const {
  if (dim < 1) {
    throw MalformedInputError("obtuse system dimension must be positive");
  }
  if (values.rows() != dim || values.cols() != dim + 1) {
    throw MalformedInputError("obtuse system needs N+1 value vectors of length N");
  }
  if (probabilities.size() != dim + 1) {
    throw MalformedInputError("obtuse system needs N+1 probabilities");
  }
  if (!values.allFinite() || !probabilities.allFinite()) {
    throw MalformedInputError("obtuse system has non-finite entries");
  }
}

RealMatrix ObtuseSystem::extended_values() const {
  RealMatrix e(dim + 1, dim + 1);
  e.row(0).setOnes();
  e.bottomRows(dim) = values;
  return e;
}

RealMatrix ObtuseSystem::scaled_value_matrix() const {
  RealMatrix theta = extended_values();
  for (int l = 0; l <= dim; ++l) {
    theta.col(l) *= std::sqrt(probabilities(l));
  }
  return theta;
}

bool ObtuseValidation::centered_normalized_ok() const {
  return mean <= tol && covariance <= tol;
}

bool ObtuseValidation::obtuse_values_ok() const {
  return inner_product <= tol && probability <= tol;
}

bool ObtuseValidation::unitary_ok() const { return unitarity <= tol; }

bool ObtuseValidation::passed() const {
  return probabilities_in_range && probability_sum <= tol && centered_normalized_ok() &&
         obtuse_values_ok() && unitary_ok();
}

ObtuseValidation validate_obtuse(const ObtuseSystem& x, double tol) {
  x.check_structure();
  const int n = x.dim;
  const auto& v = x.values;
  const auto& p = x.probabilities;

  ObtuseValidation r;
  r.tol = tol;
  r.probability_sum = std::abs(p.sum() - 1.0);
  r.probabilities_in_range = (p.array() > 0.0).all() && (p.array() < 1.0).all();

  const RealVector mean = v * p;
  r.mean = mean.cwiseAbs().maxCoeff();
  const RealMatrix cov = v * p.asDiagonal() * v.transpose();
  r.covariance = (cov - RealMatrix::Identity(n, n)).norm();

  const RealMatrix gram = v.transpose() * v;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i != j) {
        r.inner_product = std::max(r.inner_product, std::abs(gram(i, j) + 1.0));
      }
    }
    r.probability = std::max(r.probability, std::abs(p(i) * (1.0 + gram(i, i)) - 1.0));
  }

  // sqrt of a negative probability would poison the unitarity check; the
  // range flag already reports it.
  RealMatrix theta = x.extended_values();
  for (int l = 0; l <= n; ++l) {
    theta.col(l) *= std::sqrt(std::max(p(l), 0.0));
  }
  r.unitarity = (theta * theta.transpose() - RealMatrix::Identity(n + 1, n + 1)).norm();
  return r;
}

ObtuseSystem generate_obtuse(int dim, const std::optional<std::vector<double>>& probabilities,
                             std::uint64_t seed) {
  if (dim < 1) {
    throw DomainError("dimension must be positive");
  }
  const auto count = static_cast<std::size_t>(dim) + 1;
  std::mt19937_64 rng(seed);

  std::vector<double> law;
  if (probabilities) {
    check_law(*probabilities, count);
    law = *probabilities;
  } else {
    law = flat_dirichlet(count, rng);
  }
  double total = 0.0;
  for (double pi : law) total += pi;

  RealVector p(dim + 1);
  RealVector root(dim + 1);
  for (int l = 0; l <= dim; ++l) {
    p(l) = law[l] / total;
    root(l) = std::sqrt(p(l));
  }

  // Householder reflection H = I - 2 w w^T / |w|^2 with w = e_0 - sqrt(p).
  // H is symmetric and H e_0 = sqrt(p), so its first row is sqrt(p)^T.
  // w != 0 since every p_l < 1 when N >= 1.
  RealVector w = -root;
  w(0) += 1.0;
  RealMatrix h = RealMatrix::Identity(dim + 1, dim + 1) - (2.0 / w.squaredNorm()) * w * w.transpose();

  RealMatrix rotation = RealMatrix::Identity(dim + 1, dim + 1);
  rotation.bottomRightCorner(dim, dim) = random_special_orthogonal(dim, rng);
  const RealMatrix m = rotation * h;

  ObtuseSystem out;
  out.dim = dim;
  out.probabilities = p;
  out.values = m.bottomRows(dim);
  for (int l = 0; l <= dim; ++l) {
    out.values.col(l) /= root(l);
  }
  return out;
}

void GeneralRandomVariable::check_structure() const {
  if (target_dim < 1) {
    throw MalformedInputError("target dimension must be positive");
  }
  if (values.rows() != target_dim) {
    throw MalformedInputError("value vectors must have target_dim coordinates");
  }
  if (values.cols() < 2) {
    throw MalformedInputError("a general random variable needs k >= 2 values");
  }
  if (probabilities.size() != values.cols()) {
    throw MalformedInputError("one probability per value is required");
  }
}

GeneralDecomposition decompose_general(const GeneralRandomVariable& y, std::uint64_t seed) {
  y.check_structure();
  const auto k = y.support_size();
  std::vector<double> law(y.probabilities.data(), y.probabilities.data() + k);
  return decompose_general(y, generate_obtuse(k - 1, law, seed));
}

GeneralDecomposition decompose_general(const GeneralRandomVariable& y, const ObtuseSystem& basis) {
  y.check_structure();
  basis.check_structure();
  const auto k = y.support_size();
  if (basis.dim != k - 1) {
    throw DomainError("basis dimension must be k - 1");
  }
  if ((basis.probabilities - y.probabilities).cwiseAbs().maxCoeff() > kProbabilitySumTol) {
    throw DomainError("basis must share the probabilities of Y");
  }
  check_distinct(y);
  GeneralDecomposition d;
  d.basis = basis;
  // alpha(i, j) = sum_l p_l w_l^i v_l^j
  d.coefficients = y.values * basis.probabilities.asDiagonal() * basis.extended_values().transpose();
  return d;
}

RealMatrix reconstruct_values(const GeneralDecomposition& d) {
  return d.coefficients * d.basis.extended_values();
}

}  // namespace obtuse_walks
