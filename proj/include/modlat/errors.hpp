#pragma once

#include <stdexcept>
#include <string>

namespace modlat {

enum class ErrorKind {
  ArithmeticOverflow,
  LevelNotAdmissible,
  Shape,
  Definiteness,
  Divisor,
  EvenInput,
  Parity,
  Capacity,
  Parse,
  ValidationMismatch,
  Domain,
  Catalog,
  InternalInconsistency,
  Parameter,
  Granularity,
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace modlat
