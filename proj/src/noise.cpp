#include "obtuse_walks/noise.hpp"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "obtuse_walks/errors.hpp"

namespace obtuse_walks {

bool guard_override_from_env() {
  const char* v = std::getenv("OBTUSE_WALKS_GUARD_OVERRIDE");
  return v != nullptr && std::strcmp(v, "1") == 0;
}

void check_chain_guard(Eigen::Index system_dim, Eigen::Index site_dim, int sites, bool allow_large) {
  if (allow_large) return;
  const auto chain = saturating_pow(site_dim, sites);
  const bool too_big = chain > kChainDimGuard || system_dim * chain > kChainDimGuard;
  if (too_big) {
    std::ostringstream msg;
    msg << "chain dimension d*(N+1)^n = " << system_dim << "*" << site_dim << "^" << sites
        << " exceeds " << kChainDimGuard << " (set OBTUSE_WALKS_GUARD_OVERRIDE=1 to lift)";
    throw ResourceGuardError(msg.str());
  }
}

ComplexMatrix matrix_unit(int i, int j, Eigen::Index site_dim) {
  if (i < 0 || j < 0 || i >= site_dim || j >= site_dim) {
    throw DomainError("matrix unit index out of range");
  }
  ComplexMatrix a = ComplexMatrix::Zero(site_dim, site_dim);
  a(j, i) = 1.0;
  return a;
}

ChainOperator ampliate(const ComplexMatrix& op, int site, int sites, Eigen::Index system_dim,
                       bool allow_large) {
  if (op.rows() != op.cols() || op.rows() < 1) {
    throw MalformedInputError("site operator must be square");
  }
  if (sites < 1 || site < 1 || site > sites) {
    throw DomainError("site index out of range");
  }
  if (system_dim < 1) {
    throw DomainError("system dimension must be positive");
  }
  const auto s = op.rows();
  check_chain_guard(system_dim, s, sites, allow_large);

  ComplexMatrix m = ComplexMatrix::Identity(system_dim, system_dim);
  for (int k = 1; k <= sites; ++k) {
    m = kernels::kron_parallel(m, k == site ? op : ComplexMatrix::Identity(s, s));
  }
  return {sites, s, system_dim, std::move(m)};
}

ComplexMatrix multiplication_operator(const ObtuseSystem& system, const ThreeTensor& tensor,
                                      int coordinate) {
  system.check_structure();
  if (tensor.dim() != system.dim) {
    throw MalformedInputError("tensor and system dimensions differ");
  }
  const int s = system.site_dim();
  if (coordinate < 0 || coordinate >= s) {
    throw DomainError("coordinate index out of range");
  }
  if (coordinate == 0) {
    return ComplexMatrix::Identity(s, s);
  }
  const int i = coordinate;
  ComplexMatrix m = matrix_unit(0, i, s) + matrix_unit(i, 0, s);
  for (int j = 1; j < s; ++j) {
    for (int l = 1; l < s; ++l) {
      m += tensor(j, l, i) * matrix_unit(j, l, s);
    }
  }
  return m;
}

ComplexMatrix path_basis_unitary(const ObtuseSystem& system, double tol) {
  if (!validate_obtuse(system, tol).passed()) {
    throw DomainError("path basis requires a valid obtuse system");
  }
  return system.scaled_value_matrix().cast<Complex>();
}

}  // namespace obtuse_walks
