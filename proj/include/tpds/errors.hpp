#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpds {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions are incompatible (inner mode or third mode).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A matrix or tensor does not have the shape an operation requires.
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotCirculant : public Error {
 public:
  explicit NotCirculant(double max_dev)
      : Error("matrix is not block-circulant (max deviation " + std::to_string(max_dev) + ")"),
        max_deviation(max_dev) {}
  double max_deviation;
};

/// A Fourier block is numerically singular, so no T-inverse exists.
class Singular : public Error {
 public:
  Singular(std::size_t block, double min_sv)
      : Error("Fourier block " + std::to_string(block) + " is singular (smallest singular value " +
              std::to_string(min_sv) + ")"),
        block_index(block),
        min_singular_value(min_sv) {}
  std::size_t block_index;
  double min_singular_value;
};

class ImaginaryResidualExceeded : public Error {
 public:
  explicit ImaginaryResidualExceeded(double max_imag)
      : Error("inverse transform left an imaginary residual of " + std::to_string(max_imag)),
        max_imag(max_imag) {}
  double max_imag;
};

/// A block's eigenvector matrix is numerically singular; eigenvalues remain valid.
class DefectiveBlock : public Error {
 public:
  explicit DefectiveBlock(std::size_t block)
      : Error("Fourier block " + std::to_string(block) + " is defective"), block_index(block) {}
  std::size_t block_index;
};

/// Malformed T3v1 text or manifest.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line(line), detail(what) {}
  /// Same error, prefixed with the file it came from.
  ParseError(const std::string& file, const ParseError& inner)
      : Error(file + ":" + std::to_string(inner.line) + ": " + inner.detail), line(inner.line), detail(inner.detail) {}
  std::size_t line;
  std::string detail;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class OutOfBudget : public Error {
 public:
  using Error::Error;
};

}  // namespace tpds
