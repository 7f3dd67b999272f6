#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace zwm {

// Immutable, strictly increasing list of zero ordinates in [t_lo, t_hi].
class ZeroTable {
 public:
  ZeroTable() = default;
  // Validates ordering and range; throws NonMonotonic or InvalidArgument.
  static ZeroTable make(double t_lo, double t_hi, std::vector<double> ordinates, bool certified);

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  bool certified() const { return certified_; }
  std::size_t count() const { return ordinates_.size(); }
  const std::vector<double>& ordinates() const { return ordinates_; }
  // Ordinates with lo <= gamma <= hi.
  std::span<const double> in_range(double lo, double hi) const;
  bool covers(double lo, double hi) const { return t_lo_ <= lo && hi <= t_hi_; }

 private:
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
  std::vector<double> ordinates_;
  bool certified_ = false;
};

struct FindOptions {
  // Extra sample inside every Gram interval at this fraction of its width
  // (0 disables); changes the bracketing grid without changing the count.
  double gram_offset = 0.0;
  int max_subdivisions = 64;
};

ZeroTable find_zeros(double t_lo, double t_hi, double tol = 1e-9, const FindOptions& opts = {});

ZeroTable load_zeros(const std::filesystem::path& path);
// Writes the header line and %.9f ordinates; atomic (temp file + rename).
void save_zeros(const ZeroTable& table, const std::filesystem::path& path);

// theta(T)/pi + 1.
double zero_count_main(double T);
// T/(2 pi) log(T/(2 pi)) - T/(2 pi).
double zero_count_coarse(double T);

// Gram point g_n, theta(g_n) = n pi, for n >= -1.
double gram_point(long n);

struct LorentzSum {
  double value = 0.0;
  double window_part = 0.0;
  double tail_part = 0.0;
  // Bound on the error of the smooth-density tail from the fluctuation of S(u).
  double tail_uncertainty = 0.0;
  double margin = 0.0;
  bool margin_warning = false;
};

inline constexpr double kRecommendedMargin = 50.0;

LorentzSum lorentz_sum(double sigma, double t, const ZeroTable& table, bool tail);

// Re zeta'/zeta(sigma+it) + log(t/2pi)/2 - lorentz_sum(sigma, t, table, true).
double explicit_formula_residual(double sigma, double t, const ZeroTable& table);

// Fast kernel for quadrature inner loops: exact over zeros within +-window of
// t, smooth density beyond. Requires the table to cover [t - window, t + window].
class LorentzKernel {
 public:
  LorentzKernel(const ZeroTable& table, double delta, double window = 50.0);
  double operator()(double t) const;
  // Sum of delta^2/(delta^2 + (t-gamma)^2)^2 over zeros in [lo, hi]; with
  // near_only, only |t - gamma| <= 1 counts.
  double diagonal(double t, double lo, double hi, bool near_only = false) const;

 private:
  const ZeroTable* table_;
  double delta_;
  double window_;
};

}  // namespace zwm
