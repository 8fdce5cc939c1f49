#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qrel {

enum class ErrorCode {
  Domain = 1,
  ZeroProbabilityCollapse,
  InvalidSequence,
  EmptyGroup,
  MissingProbability,
  InfeasibleModel,
  Parse,
  DuplicateRespondent,
  UnknownSequenceTag,
  Schema,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Base exception for every failure raised by the library. The code is stable
// and is what the C API reports across the shared-library boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when observed probabilities put cos(theta_r) outside [-1, 1].
class InfeasibleModelError : public Error {
 public:
  InfeasibleModelError(double cos_theta_raw, const std::string& message);
  double cos_theta_raw() const noexcept { return cos_theta_raw_; }

 private:
  double cos_theta_raw_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message);
  ParseError(ErrorCode code, std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qrel
