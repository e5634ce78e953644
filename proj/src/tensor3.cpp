#include "obtuse_walks/tensor3.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "obtuse_walks/errors.hpp"

namespace obtuse_walks {

namespace {

void set_extended_entries(ThreeTensor& t) {
  const int s = t.site_dim();
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      t(i, j, 0) = delta;
      t(i, 0, j) = delta;
      t(0, i, j) = delta;
    }
  }
}

template <std::size_t K, class F>
double max_permutation_gap(std::array<int, K> idx, F&& value) {
  const double base = value(idx);
  double gap = 0.0;
  std::sort(idx.begin(), idx.end());
  do {
    gap = std::max(gap, std::abs(value(idx) - base));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return gap;
}

}  // namespace

ThreeTensor::ThreeTensor(int dim) : dim_(dim) {
  if (dim < 1) {
    throw MalformedInputError("tensor dimension must be positive");
  }
  const auto s = static_cast<std::size_t>(dim + 1);
  coeffs_.assign(s * s * s, 0.0);
  set_extended_entries(*this);
}

ThreeTensor::ThreeTensor(int dim, std::vector<double> coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
  if (dim < 1) {
    throw MalformedInputError("tensor dimension must be positive");
  }
  const auto s = static_cast<std::size_t>(dim + 1);
  if (coeffs_.size() != s * s * s) {
    std::ostringstream msg;
    msg << "tensor of dimension " << dim << " needs " << s * s * s << " coefficients, got "
        << coeffs_.size();
    throw MalformedInputError(msg.str());
  }
}

ThreeTensor compute_tensor(const ObtuseSystem& system, double tol) {
  const auto report = validate_obtuse(system, tol);
  if (!report.passed()) {
    throw DomainError("compute_tensor requires a valid obtuse system");
  }
  const int s = system.site_dim();
  const RealMatrix e = system.extended_values();
  const RealVector& p = system.probabilities;

  ThreeTensor t(system.dim);
  for (int i = 1; i < s; ++i) {
    for (int j = 1; j < s; ++j) {
      for (int k = 1; k < s; ++k) {
        double acc = 0.0;
        for (int l = 0; l < s; ++l) {
          acc += p(l) * e(i, l) * e(j, l) * e(k, l);
        }
        t(i, j, k) = acc;
      }
    }
  }
  return t;
}

double product_identity_residual(const ThreeTensor& t, const ObtuseSystem& system) {
  if (t.dim() != system.dim) {
    throw MalformedInputError("tensor and system dimensions differ");
  }
  const int s = system.site_dim();
  const RealMatrix e = system.extended_values();
  double worst = 0.0;
  for (int l = 0; l < s; ++l) {
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) {
        double rhs = 0.0;
        for (int m = 0; m < s; ++m) {
          rhs += t(i, j, m) * e(m, l);
        }
        worst = std::max(worst, std::abs(e(i, l) * e(j, l) - rhs));
      }
    }
  }
  return worst;
}

SesquiSymmetryReport check_sesqui_symmetry(const ThreeTensor& t, double tol) {
  SesquiSymmetryReport r;
  r.tol = tol;
  const int s = t.site_dim();

  for (int i = 0; i < s && r.extended_entries_exact; ++i) {
    for (int j = 0; j < s; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      if (t(i, j, 0) != delta || t(i, 0, j) != delta || t(0, i, j) != delta) {
        r.extended_entries_exact = false;
        break;
      }
    }
  }

  auto entry = [&](const std::array<int, 3>& a) { return t(a[0], a[1], a[2]); };
  for (int i = 1; i < s; ++i) {
    for (int j = 1; j < s; ++j) {
      for (int k = 1; k < s; ++k) {
        r.index_symmetry = std::max(r.index_symmetry, max_permutation_gap<3>({i, j, k}, entry));
      }
    }
  }

  // S(i,j,l,m) materialized once, then permuted.
  const auto ss = static_cast<std::size_t>(s);
  std::vector<double> prod(ss * ss * ss * ss, 0.0);
  auto at = [ss](int i, int j, int l, int m) {
    return ((static_cast<std::size_t>(i) * ss + j) * ss + l) * ss + m;
  };
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      for (int l = 0; l < s; ++l)
        for (int m = 0; m < s; ++m) {
          double acc = 0.0;
          for (int k = 0; k < s; ++k) acc += t(i, j, k) * t(l, m, k);
          prod[at(i, j, l, m)] = acc;
        }
  auto product = [&](const std::array<int, 4>& a) { return prod[at(a[0], a[1], a[2], a[3])]; };
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j)
      for (int l = j; l < s; ++l)
        for (int m = l; m < s; ++m) {
          r.product_symmetry =
              std::max(r.product_symmetry, max_permutation_gap<4>({i, j, l, m}, product));
        }
  return r;
}

double unextended_product_symmetry(const ThreeTensor& t) {
  const int s = t.site_dim();
  auto value = [&](const std::array<int, 4>& a) {
    double acc = (a[0] == a[1] && a[2] == a[3]) ? 1.0 : 0.0;
    for (int k = 1; k < s; ++k) acc += t(a[0], a[1], k) * t(a[2], a[3], k);
    return acc;
  };
  double worst = 0.0;
  for (int i = 1; i < s; ++i)
    for (int j = 1; j < s; ++j)
      for (int l = 1; l < s; ++l)
        for (int m = 1; m < s; ++m) {
          worst = std::max(worst, max_permutation_gap<4>({i, j, l, m}, value));
        }
  return worst;
}

}  // namespace obtuse_walks
