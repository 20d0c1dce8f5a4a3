#pragma once

#include <stdexcept>
#include <string>

namespace wobbly {

enum class ErrorKind {
  InvalidCurve,
  IrrationalSupport,
  InertPlace,
  SingularSpectral,
  RankDeficient,
  NonSquareLeading,
  DegenerateInjection,
  NotQSpecial,
  NotBrillNoether,
  RegimeError,
  BadInput,
  Internal,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::IrrationalSupport: return "IrrationalSupport";
    case ErrorKind::InertPlace: return "InertPlace";
    case ErrorKind::SingularSpectral: return "SingularSpectral";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NonSquareLeading: return "NonSquareLeading";
    case ErrorKind::DegenerateInjection: return "DegenerateInjection";
    case ErrorKind::NotQSpecial: return "NotQSpecial";
    case ErrorKind::NotBrillNoether: return "NotBrillNoether";
    case ErrorKind::RegimeError: return "RegimeError";
    case ErrorKind::BadInput: return "BadInput";
    case ErrorKind::Internal: return "Internal";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

inline void require(bool cond, ErrorKind k, const std::string& msg) {
  if (!cond) fail(k, msg);
}

}  // namespace wobbly
