#pragma once

#include <stdexcept>
#include <string>

namespace obtuse_walks {

/// Input is structurally wrong (lengths, shapes, unparsable files).
class MalformedInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input is well-formed but outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size guard (chain dimension, word enumeration) would be exceeded.
class ResourceGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace obtuse_walks
