#pragma once

#include <array>
#include <string>
#include <vector>

#include "zwm/arithmetic.hpp"
#include "zwm/quadrature.hpp"
#include "zwm/zeros.hpp"

namespace zwm {

enum class KernelKind {
  Exact,  // |(e^{k(s)} - 1)/s|^2 / pi with s = 1/2 + alpha + it
  Sine,   // (4/pi) (sin(kt/2)/t)^2
};

const char* kernel_name(KernelKind k);

struct SideResult {
  double value = 0.0;
  double tail_bound = 0.0;
  double abs_err_est = 0.0;
  std::size_t n_evals = 0;
  std::uint64_t breakpoints = 0;
  // Cumulative value at each requested truncation point (last one = value).
  std::vector<std::pair<double, double>> ladder;
  // RHS only: the same integral with the other kernel.
  double other_kernel = 0.0;
  std::vector<std::pair<double, double>> other_ladder;
};

// Integral over [1, X_max] of Delta(x)^2 x^{-2 alpha} dx / x^2. The tail bound
// extrapolates sup Delta^2/x over [X_max/2, X_max] with the x^{-1-2alpha} weight.
SideResult plancherel_lhs(const ArithParams& p, const FAlphaTable& f, double X_max, double tol = 1e-10,
                          std::vector<double> ladder = {});

struct RhsOptions {
  KernelKind kernel = KernelKind::Exact;
  double tol = 1e-7;          // relative
  double zeta_target = 1e-9;
  double safety = 3.0;        // multiplies the dyadic tail bound
  QuadOptions quad;
};

// Integrand at t >= 0: {exact-kernel, sine-kernel} values.
std::array<double, 2> plancherel_integrand(const ArithParams& p, double t, double zeta_target = 1e-9);
double plancherel_kernel(const ArithParams& p, double t, KernelKind kind);

// Dyadic bound for the integral over [B, 2B] using the F2 main term at a = alpha log B.
double rhs_block_bound(const ArithParams& p, double B, KernelKind kind, double safety = 3.0);
// Sum of rhs_block_bound over [t_max 2^j, t_max 2^{j+1}], j >= 0.
double rhs_tail_bound(const ArithParams& p, double t_max, KernelKind kind, double safety = 3.0);

// Integral over [lo, hi] with panels split at zeros and zero +- alpha.
std::array<QuadResult, 2> plancherel_rhs_segment(const ArithParams& p, const ZeroTable& zeros, double lo,
                                                 double hi, const RhsOptions& opt = {});

// Integral over [0, t_max]; requires a table covering up to t_max + 50.
SideResult plancherel_rhs(const ArithParams& p, const ZeroTable& zeros, double t_max,
                          const RhsOptions& opt = {}, std::vector<double> ladder = {});

struct PlancherelReport {
  double T = 0.0;
  double a = 0.0;
  double alpha = 0.0;
  double k = 0.0;
  double X_max = 0.0;
  double t_max = 0.0;
  std::string kernel;
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_other_kernel = 0.0;
  double lhs_tail_bound = 0.0;
  double rhs_tail_bound = 0.0;
  double rel_gap = 0.0;
  double allowed_gap = 0.0;
  // Jointly enlarged truncations (X_max/4, t_max/4) ... (X_max, t_max).
  std::vector<double> joint_gaps;
  std::vector<std::pair<double, double>> lhs_ladder;
  std::vector<std::pair<double, double>> rhs_ladder;
  double runtime_s = 0.0;
  bool ok() const { return rel_gap <= allowed_gap; }
};

struct CheckOptions {
  double lhs_tol = 1e-10;
  RhsOptions rhs;
  double gap_floor = 0.15;
  bool throw_on_gap = true;
};

// Throws GapExceeded (message carries the report numbers) when rel_gap exceeds
// max(gap_floor, (lhs_tail_bound + rhs_tail_bound) / max(lhs, rhs)).
PlancherelReport plancherel_check(const ArithParams& p, const SieveTable& sieve, const ZeroTable& zeros,
                                  double X_max, double t_max, const CheckOptions& opt = {});

}  // namespace zwm
