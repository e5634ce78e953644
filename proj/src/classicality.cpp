#include "obtuse_walks/classicality.hpp"

#include <cmath>
#include <sstream>

#include "obtuse_walks/errors.hpp"

namespace obtuse_walks {

namespace {

void check_w_list(const std::vector<ComplexMatrix>& w, const ObtuseSystem& system) {
  system.check_structure();
  if (static_cast<int>(w.size()) != system.site_dim()) {
    std::ostringstream msg;
    msg << "expected " << system.site_dim() << " unitaries W_0..W_N, got " << w.size();
    throw DomainError(msg.str());
  }
  const auto d = w.front().rows();
  for (std::size_t l = 0; l < w.size(); ++l) {
    if (w[l].rows() != d || w[l].cols() != d || d < 1) {
      throw MalformedInputError("all W_l must be square with the same dimension");
    }
    const double res = two_sided_unitarity_residual(w[l]);
    if (!(res <= kStructuralTol)) {
      std::ostringstream msg;
      msg << "W_" << l << " is not unitary (residual " << res << ")";
      throw DomainError(msg.str());
    }
  }
}

}  // namespace

BlockUnitary::BlockUnitary(Eigen::Index system_dim, Eigen::Index site_dim)
    : system_dim_(system_dim),
      site_dim_(site_dim),
      blocks_(static_cast<std::size_t>(site_dim * site_dim),
              ComplexMatrix::Zero(system_dim, system_dim)) {
  if (system_dim < 1 || site_dim < 2) {
    throw MalformedInputError("block unitary needs d >= 1 and N+1 >= 2");
  }
}

ComplexMatrix BlockUnitary::to_dense() const {
  const auto d = system_dim_;
  const auto s = site_dim_;
  ComplexMatrix out(d * s, d * s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j) {
      const auto& b = block(i, j);
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c) out(r * s + j, c * s + i) = b(r, c);
    }
  return out;
}

ComplexMatrix BlockUnitary::to_block_matrix() const {
  const auto d = system_dim_;
  const auto s = site_dim_;
  ComplexMatrix out(d * s, d * s);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j) out.block(j * d, i * d, d, d) = block(i, j);
  return out;
}

BlockUnitary BlockUnitary::from_dense(const ComplexMatrix& dense, Eigen::Index system_dim,
                                      Eigen::Index site_dim) {
  if (dense.rows() != system_dim * site_dim || dense.cols() != dense.rows()) {
    throw MalformedInputError("dense operator does not match d*(N+1)");
  }
  BlockUnitary u(system_dim, site_dim);
  for (Eigen::Index i = 0; i < site_dim; ++i)
    for (Eigen::Index j = 0; j < site_dim; ++j) {
      auto& b = u.block(i, j);
      for (Eigen::Index r = 0; r < system_dim; ++r)
        for (Eigen::Index c = 0; c < system_dim; ++c)
          b(r, c) = dense(r * site_dim + j, c * site_dim + i);
    }
  return u;
}

void BlockUnitary::check_structure() const {
  if (system_dim_ < 1 || site_dim_ < 2 ||
      blocks_.size() != static_cast<std::size_t>(site_dim_ * site_dim_)) {
    throw MalformedInputError("block unitary has the wrong number of blocks");
  }
  for (const auto& b : blocks_) {
    if (b.rows() != system_dim_ || b.cols() != system_dim_) {
      throw MalformedInputError("every block must be d x d");
    }
    if (!b.allFinite()) {
      throw MalformedInputError("block unitary has non-finite entries");
    }
  }
}

double BlockUnitary::unitarity_residual() const { return two_sided_unitarity_residual(to_dense()); }

BlockUnitary build_u(const std::vector<ComplexMatrix>& w, const ObtuseSystem& system) {
  check_w_list(w, system);
  const int s = system.site_dim();
  const auto d = w.front().rows();
  const RealMatrix e = system.extended_values();
  const RealVector& p = system.probabilities;

  BlockUnitary u(d, s);
  for (int k = 0; k < s; ++k) {
    for (int l = 0; l < s; ++l) {
      ComplexMatrix acc = ComplexMatrix::Zero(d, d);
      for (int i = 0; i < s; ++i) {
        acc += (p(i) * e(k, i) * e(l, i)) * w[static_cast<std::size_t>(i)];
      }
      u.block(k, l) = std::move(acc);
    }
  }
  return u;
}

BlockUnitary build_u_bernoulli(const ComplexMatrix& w0, const ComplexMatrix& w1, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("Bernoulli parameter must lie in (0,1)");
  }
  if (w0.rows() != w0.cols() || w1.rows() != w1.cols() || w0.rows() != w1.rows() ||
      w0.rows() < 1) {
    throw MalformedInputError("W0 and W1 must be square with the same dimension");
  }
  for (const auto* w : {&w0, &w1}) {
    const double res = two_sided_unitarity_residual(*w);
    if (!(res <= kStructuralTol)) {
      std::ostringstream msg;
      msg << "W_" << (w == &w0 ? 0 : 1) << " is not unitary (residual " << res << ")";
      throw DomainError(msg.str());
    }
  }
  const double q = 1.0 - p;
  const double root = std::sqrt(p * q);
  BlockUnitary u(w0.rows(), 2);
  u.block(0, 0) = p * w0 + q * w1;
  u.block(0, 1) = root * (w0 - w1);
  u.block(1, 0) = root * (w0 - w1);
  u.block(1, 1) = q * w0 + p * w1;
  return u;
}

ClassicalForm make_classical_form(const std::vector<ComplexMatrix>& w, const ObtuseSystem& system) {
  check_w_list(w, system);
  ClassicalForm form;
  form.system = system;
  form.tensor = compute_tensor(system);
  form.w = w;
  const int s = system.site_dim();
  const auto d = w.front().rows();
  const RealMatrix e = system.extended_values();
  form.b.assign(static_cast<std::size_t>(s), ComplexMatrix::Zero(d, d));
  for (int i = 0; i < s; ++i) {
    for (int l = 0; l < s; ++l) {
      form.b[static_cast<std::size_t>(i)] += (system.probabilities(l) * e(i, l)) * w[static_cast<std::size_t>(l)];
    }
  }
  return form;
}

DetectionReport detect_classical(const BlockUnitary& u, const ObtuseSystem& system, double tol) {
  u.check_structure();
  system.check_structure();
  if (u.site_dim() != system.site_dim()) {
    throw DomainError("block unitary site dimension does not match the obtuse system");
  }
  const int s = system.site_dim();
  const auto d = u.system_dim();
  const ThreeTensor t = compute_tensor(system);
  const RealMatrix e = system.extended_values();

  DetectionReport r;
  r.tol = tol;
  r.input_unitarity = u.unitarity_residual();

  std::vector<ComplexMatrix> b;
  b.reserve(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) b.push_back(u.block(i, 0));

  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      ComplexMatrix expect = ComplexMatrix::Zero(d, d);
      for (int k = 0; k < s; ++k) expect += t(i, j, k) * b[static_cast<std::size_t>(k)];
      const double res = (u.block(i, j) - expect).norm();
      if (res > r.coefficient_residual) {
        r.coefficient_residual = res;
        r.worst_i = i;
        r.worst_j = j;
      }
    }
  }

  std::vector<ComplexMatrix> w;
  w.reserve(static_cast<std::size_t>(s));
  for (int l = 0; l < s; ++l) {
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < s; ++i) acc += e(i, l) * b[static_cast<std::size_t>(i)];
    const double res = two_sided_unitarity_residual(acc);
    r.w_residuals.push_back(res);
    if (res > r.w_unitarity_residual) {
      r.w_unitarity_residual = res;
      r.worst_l = l;
    }
    w.push_back(std::move(acc));
  }

  if (!(r.input_unitarity <= kStructuralTol)) {
    r.failed_check = "input_unitarity";
  } else if (!(r.coefficient_residual <= tol)) {
    r.failed_check = "coefficients";
  } else if (!(r.w_unitarity_residual <= tol)) {
    r.failed_check = "w_unitarity";
  }
  r.accepted = r.failed_check.empty();
  if (r.accepted) {
    r.form = ClassicalForm{system, t, std::move(w), std::move(b)};
  }
  return r;
}

ChainOperator classical_step_operator(const ClassicalForm& form, int sites, int site,
                                      bool allow_large) {
  const int s = form.system.site_dim();
  const auto d = form.system_dim();
  check_chain_guard(d, s, sites, allow_large);
  ChainOperator out{sites, s, d, ComplexMatrix()};
  for (int k = 0; k < s; ++k) {
    const ComplexMatrix m = multiplication_operator(form.system, form.tensor, k);
    const ChainOperator placed = ampliate(m, site, sites, 1, allow_large);
    ComplexMatrix term = kernels::kron_parallel(form.b[static_cast<std::size_t>(k)], placed.matrix);
    if (k == 0) {
      out.matrix = std::move(term);
    } else {
      out.matrix += term;
    }
  }
  return out;
}

ChainOperator ampliate_block_unitary(const BlockUnitary& u, int sites, int site, bool allow_large) {
  u.check_structure();
  const auto s = u.site_dim();
  const auto d = u.system_dim();
  check_chain_guard(d, s, sites, allow_large);
  ChainOperator out{sites, s, d, ComplexMatrix::Zero(0, 0)};
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < s; ++j) {
      const ChainOperator placed =
          ampliate(matrix_unit(static_cast<int>(i), static_cast<int>(j), s), site, sites, 1, allow_large);
      ComplexMatrix term = kernels::kron_parallel(u.block(i, j), placed.matrix);
      if (out.matrix.size() == 0) {
        out.matrix = std::move(term);
      } else {
        out.matrix += term;
      }
    }
  }
  return out;
}

}  // namespace obtuse_walks
