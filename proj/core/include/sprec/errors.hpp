#pragma once

#include <stdexcept>
#include <string>

namespace sprec {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition or schema.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// hr/lr comparison requested for a law without a density.
class UnsupportedOrder : public Error {
 public:
  using Error::Error;
};

/// Mixture weights that are not a probability simplex.
class WeightError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Density-based quadrature requested for a copula with a singular part.
class NoDensity : public Error {
 public:
  using Error::Error;
};

/// Exact discrete evaluation beyond the atom budget.
class SizeLimit : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON document handed to a decoder.
class SchemaError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace sprec
