#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bic {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class RowNotStochastic : public Error {
 public:
  RowNotStochastic(std::size_t row, double deviation)
      : Error("row " + std::to_string(row) + " is not stochastic (sum deviates from 1 by " +
              std::to_string(deviation) + ")"),
        row_(row),
        deviation_(deviation) {}

  std::size_t row() const noexcept { return row_; }
  double deviation() const noexcept { return deviation_; }

 private:
  std::size_t row_;
  double deviation_;
};

class NegativeEntry : public Error {
 public:
  NegativeEntry(std::size_t row, std::size_t col, double value)
      : Error("negative probability " + std::to_string(value) + " at row " + std::to_string(row) +
              ", column " + std::to_string(col)),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class UnknownVariable : public Error {
 public:
  using Error::Error;
};

class MissingAtom : public Error {
 public:
  using Error::Error;
};

/// A mutual information came out below -1e-10; indicates a numerics bug.
class NegativityBeyondTolerance : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

class UnboundedRegion : public Error {
 public:
  using Error::Error;
};

/// The channel does not satisfy the partial order a comparison presupposes.
class ConditionNotEstablished : public Error {
 public:
  using Error::Error;
};

/// The input distribution violates I(V1;Y1|U1)+I(V2;Y2|U1,U2)-I(V1;V2|U1) >= 0.
class Cnst1Violated : public Error {
 public:
  using Error::Error;
};

}  // namespace bic
