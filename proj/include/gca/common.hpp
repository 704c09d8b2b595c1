#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gca {

using Int = boost::multiprecision::cpp_int;

enum class ErrorKind {
  Parse,
  UnknownVertex,
  DuplicateId,
  TooLarge,
  CapExceeded,
  NotHereditarySaturated,
  NotNested,
  NotSupportedInW,
  NotATail,
  NotCircle,
  NotMonotone,
  NotNatural,
  NotACocycle,
  MissingImage,
  IndexMismatch,
  DimensionEquationViolated,
  DimsMismatch,
  HasCycle,
  InconsistentClassifiers,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Process exit status for the CLI contract.
  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::TooLarge:
      case ErrorKind::CapExceeded:
        return 2;
      case ErrorKind::InconsistentClassifiers:
      case ErrorKind::Internal:
        return 3;
      default:
        return 1;
    }
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

// Internal consistency checks; an ErrorKind::Internal escaping to the CLI
// maps to exit status 3.
inline void check_internal(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorKind::Internal, "internal invariant violated: " + msg);
}

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace gca
