#pragma once

#include <stdexcept>
#include <string>

namespace evolint {

// Each error class maps onto one CLI exit code (see tools/evolint.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Objects from different algebras or with mismatched block shapes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the set an operation is defined on
// (foreign time labels, subsets outside Sigma_0, foreign grid points).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A stated hypothesis of an operation does not hold (non-unitary
// conjugator, group law requested for non-disjoint subsets).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical data that cannot be used (non-finite Lagrangian values).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace evolint
