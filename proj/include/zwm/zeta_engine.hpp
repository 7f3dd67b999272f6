#pragma once

#include <complex>

#include "zwm/special.hpp"

namespace zwm {

struct ComplexPoint {
  double sigma = 0.5;
  double t = 0.0;
  cplx s() const { return {sigma, t}; }
};

struct EvalResult {
  cplx value;
  double abs_error_bound = 0.0;
  int terms_used = 1;
};

struct NearOnePair {
  double logderiv_at_1_plus_alpha = 0.0;
  double zeta_at_1_minus_alpha = 0.0;
  double alpha = 0.0;
  // zeta'/zeta(1+alpha) + 1/alpha and zeta(1-alpha) + 1/alpha; both tend to
  // Euler's constant as alpha -> 0 and stay finite there.
  double logderiv_regular = 0.0;
  double zeta_regular = 0.0;
  bool series_branch = false;
};

inline constexpr double kMaxHeight = 1e6;
inline constexpr double kDefaultLogDerivFloor = 1e-14;
inline constexpr double kNearOneThreshold = 1.0 / 64.0;

EvalResult zeta(ComplexPoint s, double target_abs_err = 1e-12);
// Differentiated approximation; with self_check the Cauchy-circle value is
// computed too and SelfCheckFailed is thrown if they disagree beyond bounds.
EvalResult zeta_prime(ComplexPoint s, double target_abs_err = 1e-12, bool self_check = false);
EvalResult zeta_prime_cauchy(ComplexPoint s, double target_abs_err = 1e-12, double radius = 1e-3,
                             int nodes = 32);
EvalResult log_deriv(ComplexPoint s, double target_abs_err = 1e-12,
                     double floor = kDefaultLogDerivFloor);
EvalResult chi(ComplexPoint s);
cplx chi_log_deriv(ComplexPoint s);

double theta(double t);
double theta_asymptotic(double t);
double theta_loggamma(double t);
double hardy_z(double t, double target_abs_err = 1e-12);

NearOnePair near_one(double alpha);
NearOnePair near_one_series(double alpha);
NearOnePair near_one_direct(double alpha);

// zeta and zeta' at sigma+it together with zeta(1/2+it), sharing one pass.
struct LineSample {
  cplx zeta_shift;
  cplx dzeta_shift;
  cplx zeta_half;
  double abs_error_bound = 0.0;
};
LineSample sample_line(double sigma, double t, double target_abs_err = 1e-9);

}  // namespace zwm
