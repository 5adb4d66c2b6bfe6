#ifndef LIOUSPEC_ERRORS_HPP_
#define LIOUSPEC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace liouspec {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: parameters out of range, wrong shapes, malformed states.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Something went wrong inside a numerical routine.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class NonUniqueSteadyState : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularResolvent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A Liouvillian coupled two weak-symmetry sectors.
class SectorLeak : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EigensolverFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateWindow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoPeak : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace liouspec

#endif  // LIOUSPEC_ERRORS_HPP_
