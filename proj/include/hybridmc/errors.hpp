#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmc {

/// Misuse of an API: mixed managers, undeclared propositions, bad arguments.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A configured resource bound (node ceiling, deadline) was exceeded.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class TimeoutError : public ResourceError {
public:
  TimeoutError() : ResourceError("deadline exceeded") {}
};

/// Text input could not be parsed. `position` is a byte offset for
/// single-line inputs and a 1-based line number for file formats.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &what, std::size_t position)
      : std::runtime_error(what), position_(position) {}

  [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

/// A model is inconsistent, e.g. a Petri net place exceeds its declared bound.
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hmc
