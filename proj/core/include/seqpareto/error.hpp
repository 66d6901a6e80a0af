#pragma once

#include <stdexcept>
#include <string>

namespace seqpareto {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector lengths disagree with the declared dimensionality.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs at least one element received none.
class EmptySetError : public Error {
 public:
  using Error::Error;
};

/// Malformed, non-finite, or insufficient input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A required column or field is missing.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Cholesky factorization failed even after jitter escalation.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Object used before it was initialized.
class StateError : public Error {
 public:
  using Error::Error;
};

class MetricError : public Error {
 public:
  using Error::Error;
};

/// A front point does not dominate the hypervolume reference point.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

/// The candidate pool has no unconsumed points left.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Joint improvement requested for a batch too large for inclusion-exclusion.
class CombinatorialLimitError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint document has the wrong version or is corrupt.
class MigrationError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace seqpareto
