#include "qrel/error.hpp"

namespace qrel {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::ZeroProbabilityCollapse: return "ZeroProbabilityCollapse";
    case ErrorCode::InvalidSequence: return "InvalidSequence";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::MissingProbability: return "MissingProbability";
    case ErrorCode::InfeasibleModel: return "InfeasibleModel";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::DuplicateRespondent: return "DuplicateRespondent";
    case ErrorCode::UnknownSequenceTag: return "UnknownSequenceTag";
    case ErrorCode::Schema: return "SchemaError";
    case ErrorCode::Io: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

InfeasibleModelError::InfeasibleModelError(double cos_theta_raw, const std::string& message)
    : Error(ErrorCode::InfeasibleModel, message), cos_theta_raw_(cos_theta_raw) {}

ParseError::ParseError(std::size_t line, const std::string& message)
    : ParseError(ErrorCode::Parse, line, message) {}

ParseError::ParseError(ErrorCode code, std::size_t line, const std::string& message)
    : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace qrel
