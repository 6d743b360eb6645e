#pragma once

#include <stdexcept>
#include <string>

namespace bellcert {

// Malformed or missing fields in serialized input.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// Incompatible matrix/subsystem dimensions.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// Input violates a documented precondition (rank-deficient state,
// certificate not near-maximal, spectrum outside the admissible range, ...).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// Preconditions held but the certified structure failed a residual gate.
class CertificationError : public std::runtime_error {
 public:
  explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bellcert
