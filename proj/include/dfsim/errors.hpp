#pragma once

#include <stdexcept>
#include <string>

namespace dfsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: bad sizes, indices, parameters. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class NormalizationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class SizeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class SiteError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class PermutationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class SubsetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class PhysicalityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class SingularityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};
class UsageError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Numerical failure during a run. The CLI maps these to exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class IntegrityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class ExtractionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};
class EigenstateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dfsim
