#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frozendisc {

enum class ErrorKind {
  Dimension,
  Validity,
  Physicality,
  FamilyCondition,
  Domain,
  Resolution,
  NumericalFailure,
  Config,
  Io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Validity: return "validity error";
    case ErrorKind::Physicality: return "physicality error";
    case ErrorKind::FamilyCondition: return "family-condition error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Resolution: return "resolution error";
    case ErrorKind::NumericalFailure: return "numerical failure";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace frozendisc
