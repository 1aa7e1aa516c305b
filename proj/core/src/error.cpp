#include "mslab/error.hpp"

namespace mslab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::GridMismatch: return "grid mismatch";
    case ErrorKind::NoProfileInBracket: return "no profile in bracket";
    case ErrorKind::NotConverged: return "not converged";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Stagnation: return "stagnation";
    case ErrorKind::NearSingular: return "mu too close to spectrum";
    case ErrorKind::NoCleanTail: return "no clean exponential tail";
    case ErrorKind::SpectralMaximality: return "spectral maximality violated";
    case ErrorKind::BlowUp: return "blow-up or instability detected";
    case ErrorKind::AlphaTooLarge: return "alpha too large for configuration";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Io: return "io error";
  }
  return "unknown";
}

}  // namespace mslab
