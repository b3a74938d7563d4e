#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wlcae {

/// Dimension mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Invalid hyperparameter or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar function returned a non-finite value during numerical differentiation.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::size_t coordinate)
      : std::runtime_error(what), coordinate_(coordinate) {}
  std::size_t coordinate() const noexcept { return coordinate_; }

 private:
  std::size_t coordinate_;
};

/// Activation evaluated at a pole (complex arctan at +-j).
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Forward pass produced a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed IDX input. `offset` is the byte position where parsing failed.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { BadMagic, Truncated, CountMismatch, BadDimensions, BadLabel, Io };

  ParseError(Kind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what), kind_(kind), offset_(offset) {}
  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Dataset cannot satisfy a request (e.g. too few members of a class).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; message carries the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wlcae
