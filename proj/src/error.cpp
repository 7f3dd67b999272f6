#include "zwm/error.hpp"

#include <cstdio>

namespace zwm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::HeightOutOfRange: return "HeightOutOfRange";
    case ErrorCode::PoleAt1: return "PoleAt1";
    case ErrorCode::SelfCheckFailed: return "SelfCheckFailed";
    case ErrorCode::NearZeroSingularity: return "NearZeroSingularity";
    case ErrorCode::PoleOfGamma: return "PoleOfGamma";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::CertificationFailed: return "CertificationFailed";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::UnknownFormula: return "UnknownFormula";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::MaxDepthExceeded: return "MaxDepthExceeded";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::SlowDecayDetected: return "SlowDecayDetected";
    case ErrorCode::UncertifiedZeros: return "UncertifiedZeros";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::SieveTooSmall: return "SieveTooSmall";
    case ErrorCode::TooManyBreakpoints: return "TooManyBreakpoints";
    case ErrorCode::GapExceeded: return "GapExceeded";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& msg)
    : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

static std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

NearZeroSingularity::NearZeroSingularity(double modulus)
    : Error(ErrorCode::NearZeroSingularity, "|zeta(s)| = " + fmt_double(modulus) + " below floor"),
      modulus_(modulus) {}

MalformedLine::MalformedLine(std::size_t line, const std::string& text)
    : Error(ErrorCode::MalformedLine, "line " + std::to_string(line) + ": '" + text + "'"), line_(line) {}

NonFiniteSample::NonFiniteSample(double x)
    : Error(ErrorCode::NonFiniteSample, "integrand not finite at x = " + fmt_double(x)), x_(x) {}

}  // namespace zwm
