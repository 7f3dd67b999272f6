#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "zwm/quadrature.hpp"
#include "zwm/zeros.hpp"

namespace zwm {

struct ShiftParams {
  double a = 0.0;
  double T = 0.0;
  double log_T = 0.0;
  double sigma = 0.5;
  double delta = 0.0;  // sigma - 1/2 = a / log T
  // Loose flag for the range (log T)^{-1/4} <= a <= 1 where the sandwich bounds apply.
  bool in_sandwich_range = false;

  static ShiftParams make(double a, double T);
};

struct MomentReport {
  std::string kind;
  double a = 0.0;
  double T = 0.0;
  double raw = 0.0;
  int p = 3;
  double normalized = 0.0;
  double prediction = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  QuadResult quad;
  double runtime_s = 0.0;
};

MomentReport make_report(std::string kind, const ShiftParams& sp, double raw, int p,
                         const QuadResult& q);

// Components integrated together over [T, 2T] in one pass.
enum MomentComponent : std::size_t {
  kWeighted,      // |w|^2 |zeta(1/2+it)|^2, w = zeta'/zeta(sigma+it)
  kUnweighted,    // |w|^2
  kZetaPrime,     // |zeta'(sigma+it)|^2
  kI1,            // Re w log(t/2pi) |zeta(1/2+it)|^2
  kI2Re,          // Re w^2 |zeta(1/2+it)|^2
  kI2Im,          // Im w^2 |zeta(1/2+it)|^2
  kSFull,         // K(t)^2 |zeta(1/2+it)|^2, K the Lorentzian sum over all zeros
  kSDiag,         // sum over T <= gamma <= 2T of delta^2/(delta^2+(t-gamma)^2)^2, times |zeta|^2
  kSDiagNear,     // same, restricted to |t - gamma| <= 1
  kNumComponents
};

using MomentSample = std::array<double, kNumComponents>;

struct MomentOptions {
  double tol = 1e-6;          // relative, per component
  double zeta_target = 1e-8;  // absolute target for each zeta evaluation
  double kernel_window = kRecommendedMargin;
  QuadOptions quad;
};

struct MomentSweep {
  ShiftParams params;
  VecQuadResult<kNumComponents> quad;
  double runtime_s = 0.0;

  QuadResult component(MomentComponent c) const;
};

// Pointwise integrand; kernel may be null, then the zero-sum components are 0.
MomentSample moment_integrand(const ShiftParams& sp, double t, const LorentzKernel* kernel,
                              double zeta_target = 1e-8);

// Panels over [T, 2T]: cuts at gamma, gamma +- delta, gamma +- 2 delta; width
// min(0.25, delta/2) within 2 delta of a zero and 0.5 elsewhere.
std::vector<std::pair<double, double>> moment_panels(const ShiftParams& sp, const ZeroTable& zeros);

// Requires a certified table covering [T - 50, 2T + 50]; throws UncertifiedZeros.
MomentSweep moment_sweep(const ShiftParams& sp, const ZeroTable& zeros, const MomentOptions& opt = {});

MomentReport weighted_moment(const MomentSweep& s);
MomentReport unweighted_moment(const MomentSweep& s);
MomentReport zetaprime_moment(const MomentSweep& s);
MomentReport i1_numeric(const MomentSweep& s);
MomentReport i2_numeric(const MomentSweep& s);

enum class SMode { Full, Diagonal, DiagonalNear };
MomentReport s_weighted(const MomentSweep& s, SMode mode);

MomentReport weighted_moment(const ShiftParams& sp, const ZeroTable& zeros, double tol = 1e-6);
MomentReport unweighted_moment(const ShiftParams& sp, const ZeroTable& zeros, double tol = 1e-6);
MomentReport s_weighted(const ShiftParams& sp, const ZeroTable& zeros, double tol, SMode mode);
MomentReport i2_numeric(const ShiftParams& sp, const ZeroTable& zeros, double tol = 1e-6);
// Needs no zeros: plain 0.5-wide panels.
MomentReport zetaprime_moment(const ShiftParams& sp, double tol = 1e-6,
                              double zeta_target = 1e-8);

struct Lemma22Report {
  double lhs = 0.0;             // weighted moment
  double rhs = 0.0;             // T (log T)^3 LEMMA22_MAIN + 2 S_full
  double residual_ratio = 0.0;  // (lhs - rhs) / (T (log T)^2)
  double i1_ratio = 0.0;        // Re I1 / (T (log T)^3 I1_MAIN)
  double i2_ratio = 0.0;        // Re I2 / (T (log T)^3 I2_MAIN)
  double i2_imag_fraction = 0.0;
  double full_over_diag = 0.0;
  double near_truncation_over_T = 0.0;  // (S_diag - S_diag_near) / T
};

Lemma22Report lemma22_identity_check(const MomentSweep& s);

// max over samples of | |w|^2 - (2 (Re w)^2 - Re w^2) | / |w|^2.
double pointwise_split_residual(const ShiftParams& sp, const std::vector<double>& ts);

struct RatioReport {
  double a = 0.0;
  double T = 0.0;
  double c = 10.0;
  double bound = 0.0;
  double max_ratio = 0.0;
  double argmax_t = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  bool ok() const { return violations == 0; }
};

RatioReport soundararajan_ratio_check(const ShiftParams& sp, const std::vector<double>& ts,
                                      double c = 10.0);
// n seeded-uniform heights in [lo, hi).
std::vector<double> seeded_heights(std::size_t n, double lo, double hi, std::uint64_t seed);

struct GonekReport {
  double x = 0.0;
  double T = 0.0;
  std::size_t zeros_used = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  // Same kernel with the local density log(t/2pi)/2pi integrated over [T, 2T];
  // reported for comparison, not used by the ratio.
  double rhs_local = 0.0;
};

// Sum over T <= gamma <= 2T of |zeta(1/2 + i gamma + i x)|^2 against
// T (log T)^2 / 2pi (1 - sinc^2(x log T / 2)).
GonekReport gonek_discrete(double x, double T, const ZeroTable& zeros);

struct PairCorrelationReport {
  double a_lo = 0.0;
  double a_hi = 0.0;
  double T = 0.0;
  std::size_t n_zeros = 0;
  std::size_t pairs = 0;
  double statistic = 0.0;
  double prediction = 0.0;
};

// Ordered pairs of zeros in (0, T] with 2 pi a_lo / log T < gamma - gamma' < 2 pi a_hi / log T,
// divided by the number of zeros. Prediction: integral of 1 - (sin pi u / pi u)^2
// plus 1 when the open window contains 0. With local_density the gap is
// instead scaled by log(g/2pi)/2pi at the midpoint g of the pair (unfolded).
PairCorrelationReport pair_correlation(const ZeroTable& zeros, double a_lo, double a_hi, double T,
                                       bool local_density = false);
double pair_correlation_density_integral(double a_lo, double a_hi);

}  // namespace zwm
