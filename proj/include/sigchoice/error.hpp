#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigchoice {

enum class ErrorKind {
  Size,         // lattice too large
  Index,        // stage / subset index out of range
  Dimension,    // empty or wrongly sized vector
  Numeric,      // non-finite input
  Shape,        // matrix dimension mismatch
  NotStochastic,
  Structure,    // weight matrix violates the subset support
  EmptyData,
  Parameter,
  Partition,    // samples not divisible by bins
  EmptyBin,
  Dependency,   // a prior stage estimate is missing
  Convergence,
  Io,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace sigchoice
