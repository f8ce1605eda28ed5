#include "modlat/errors.hpp"

namespace modlat {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ArithmeticOverflow: return "arithmetic-overflow";
    case ErrorKind::LevelNotAdmissible: return "level-not-admissible";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Definiteness: return "definiteness";
    case ErrorKind::Divisor: return "divisor";
    case ErrorKind::EvenInput: return "even-input";
    case ErrorKind::Parity: return "parity";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::ValidationMismatch: return "validation-mismatch";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Catalog: return "catalog";
    case ErrorKind::InternalInconsistency: return "internal-inconsistency";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Granularity: return "granularity";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace modlat
