#pragma once

#include <stdexcept>
#include <string>

namespace mslab {

enum class ErrorKind {
  InvalidArgument,
  GridMismatch,
  NoProfileInBracket,
  NotConverged,
  Divergence,
  Stagnation,
  NearSingular,
  NoCleanTail,
  SpectralMaximality,
  BlowUp,
  AlphaTooLarge,
  Config,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace mslab
