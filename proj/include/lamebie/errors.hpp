#pragma once

#include <stdexcept>
#include <string>

namespace lamebie {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a kernel (e.g. evaluation at the origin).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point coincides with a lattice point where the kernel is singular.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// The lattice sums could not meet their tail bound within the cutoff cap.
class EwaldError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lamebie
