#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "zwm/zeta_engine.hpp"

namespace zwm {

inline constexpr std::uint64_t kMaxSieveLimit = 100'000'000;

// Prime powers up to N with their von Mangoldt weights.
class SieveTable {
 public:
  explicit SieveTable(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  double lambda(std::uint64_t n) const;
  std::span<const std::uint32_t> prime_powers() const { return pp_; }
  std::span<const double> prime_power_logs() const { return pp_log_; }
  // psi(x) = sum of Lambda(n) for n <= x.
  double psi(double x) const;
  // Compares lambda(n) with trial factorization at `samples` seeded n; returns mismatches.
  std::size_t spot_check(std::size_t samples, std::uint64_t seed) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> pp_;
  std::vector<double> pp_log_;
};

// Lambda(n) by trial division.
double lambda_trial(std::uint64_t n);

// Sum of d^alpha over d <= floor(y), memoized on floor(y).
class DivisorPowerSum {
 public:
  explicit DivisorPowerSum(double alpha) : alpha_(alpha) {}
  double operator()(double y);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  std::unordered_map<std::uint64_t, double> memo_;
};

struct ArithParams {
  double a = 0.0;
  double T = 0.0;
  double b = 1.0;
  double alpha = 0.0;  // a / log T
  double k = 0.0;      // log(1 + 1/T)

  static ArithParams make(double a, double T, double b = 1.0);
  static ArithParams from_alpha(double alpha, double T, double b = 1.0);
};

// M_alpha(x) written so that the two 1/alpha poles cancel analytically.
class MainTerm {
 public:
  enum class Branch { Auto, Series, Direct };
  explicit MainTerm(double alpha, Branch branch = Branch::Auto);

  double operator()(double x) const;
  // M(x (1 + h)) - M(x) without cancellation.
  double increment(double x, double h) const;
  double alpha() const { return alpha_; }
  // -zeta'/zeta(1+alpha)/(1+alpha) and zeta(1-alpha); infinite at alpha = 0.
  double coeff_main() const;
  double coeff_linear() const;

 private:
  double alpha_;
  double r1_;  // zeta'/zeta(1+alpha) + 1/alpha
  double r2_;  // zeta(1-alpha) + 1/alpha
};

double M_alpha(double x, double alpha);

// Prefix sums of g(n) = sum over m d = n of Lambda(m) d^alpha, so that
// f_alpha(x) = prefix[floor x].
class FAlphaTable {
 public:
  // limit = 0 uses the whole sieve.
  FAlphaTable(const SieveTable& sieve, double alpha, std::uint64_t limit = 0);
  double f(double x) const;
  // f(x (1 + h)) - f(x) with both arguments inside the table.
  double increment(double x, double h) const;
  std::uint64_t limit() const { return prefix_.size() - 1; }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  std::vector<double> prefix_;
};

// Hyperbola form sum over m <= x of Lambda(m) * sum_{d <= x/m} d^alpha.
double f_alpha(double x, double alpha, const SieveTable& sieve);

// f(x + x/T) - f(x) - M(x + x/T) + M(x).
double discrepancy(double x, const ArithParams& p, const SieveTable& sieve);
double discrepancy(double x, const ArithParams& p, const FAlphaTable& f, const MainTerm& m);

struct PiecewiseOptions {
  double tol = 1e-10;     // absolute, spread over the pieces
  int refine = 0;         // split each piece into 2^refine before integrating
  double weight_exponent = 2.0;  // integrand Delta^2 x^{-weight_exponent}
  double envelope_from = 0.0;    // record sup Delta^2/x for x >= envelope_from
  std::uint64_t max_breakpoints = 100'000'000;
};

struct PiecewiseResult {
  double value = 0.0;
  double abs_err_est = 0.0;
  std::uint64_t breakpoints = 0;
  std::size_t n_evals = 0;
  double envelope = 0.0;
};

// Integral of Delta(x)^2 x^{-e} over [x_lo, x_hi], split where x or x(1+1/T)
// crosses an integer.
PiecewiseResult integrate_discrepancy(const ArithParams& p, const FAlphaTable& f, double x_lo,
                                      double x_hi, const PiecewiseOptions& opt = {});

struct VarianceReport {
  double T = 0.0;
  double a = 0.0;
  double b = 1.0;
  double J = 0.0;
  double normalized = 0.0;  // J T / (log T)^3
  std::uint64_t breakpoint_count = 0;
  double quad_err = 0.0;
  double runtime_s = 0.0;
};

VarianceReport J_b(const ArithParams& p, const SieveTable& sieve, double tol = 1e-10, int refine = 0);

}  // namespace zwm
