#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zwm {

enum class ErrorCode {
  InvalidArgument,
  HeightOutOfRange,
  PoleAt1,
  SelfCheckFailed,
  NearZeroSingularity,
  PoleOfGamma,
  AlphaOutOfRange,
  CertificationFailed,
  MalformedLine,
  NonMonotonic,
  UnknownFormula,
  IdentityViolation,
  MaxDepthExceeded,
  NonFiniteSample,
  SlowDecayDetected,
  UncertifiedZeros,
  LimitExceeded,
  SieveTooSmall,
  TooManyBreakpoints,
  GapExceeded,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// |zeta(s)| fell below the log-derivative floor; the caller should split its panel.
class NearZeroSingularity : public Error {
 public:
  explicit NearZeroSingularity(double modulus);
  double modulus() const noexcept { return modulus_; }

 private:
  double modulus_;
};

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line, const std::string& text);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NonFiniteSample : public Error {
 public:
  explicit NonFiniteSample(double x);
  double location() const noexcept { return x_; }

 private:
  double x_;
};

}  // namespace zwm
