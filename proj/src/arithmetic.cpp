#include "zwm/arithmetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "zwm/error.hpp"
#include "zwm/numeric.hpp"
#include "zwm/parallel.hpp"
#include "zwm/quadrature.hpp"

namespace zwm {

namespace {

// expm1(alpha y) / alpha, continuous at alpha = 0.
double expm1_over(double alpha, double y) {
  if (alpha == 0.0) return y;
  return std::expm1(alpha * y) / alpha;
}

void check_limit(std::uint64_t n) {
  if (n > kMaxSieveLimit)
    throw Error(ErrorCode::LimitExceeded, "sieve limit " + std::to_string(n) + " exceeds 1e8");
}

std::vector<std::uint32_t> small_primes(std::uint32_t n) {
  std::vector<char> comp(n + 1, 0);
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = std::uint64_t(i) * i; j <= n; j += i) comp[j] = 1;
  }
  return out;
}

}  // namespace

SieveTable::SieveTable(std::uint64_t limit) : limit_(limit) {
  check_limit(limit);
  if (limit < 2) return;
  const auto root = static_cast<std::uint32_t>(std::sqrt(double(limit))) + 1;
  const auto base = small_primes(root);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> found;  // (prime power, prime)
  found.reserve(static_cast<std::size_t>(1.1 * limit / std::max(1.0, std::log(double(limit)) - 1.1)) + 16);

  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> comp(kSegment);
  for (std::uint64_t lo = 2; lo <= limit; lo += kSegment) {
    std::uint64_t hi = std::min(limit + 1, lo + kSegment);
    std::fill(comp.begin(), comp.end(), 0);
    for (std::uint32_t p : base) {
      std::uint64_t p2 = std::uint64_t(p) * p;
      if (p2 >= hi) break;
      std::uint64_t start = std::max(p2, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j < hi; j += p) comp[j - lo] = 1;
    }
    for (std::uint64_t n = lo; n < hi; ++n) {
      if (comp[n - lo]) continue;
      for (std::uint64_t q = n; q <= limit; q *= n) {
        found.emplace_back(static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(n));
        if (q > limit / n) break;
      }
    }
  }
  std::sort(found.begin(), found.end());
  pp_.reserve(found.size());
  pp_log_.reserve(found.size());
  for (auto [q, p] : found) {
    pp_.push_back(q);
    pp_log_.push_back(std::log(double(p)));
  }
}

double SieveTable::lambda(std::uint64_t n) const {
  if (n > limit_) throw Error(ErrorCode::SieveTooSmall, "n = " + std::to_string(n) + " beyond sieve limit");
  auto it = std::lower_bound(pp_.begin(), pp_.end(), n);
  if (it == pp_.end() || *it != n) return 0.0;
  return pp_log_[it - pp_.begin()];
}

double SieveTable::psi(double x) const {
  if (x > double(limit_) + 1.0) throw Error(ErrorCode::SieveTooSmall, "psi argument beyond sieve limit");
  CompensatedSum s;
  for (std::size_t i = 0; i < pp_.size() && pp_[i] <= x; ++i) s.add(pp_log_[i]);
  return s.value();
}

std::size_t SieveTable::spot_check(std::size_t samples, std::uint64_t seed) const {
  if (limit_ < 2) return 0;
  std::mt19937_64 rng(seed);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    std::uint64_t n = 1 + rng() % limit_;
    if (std::fabs(lambda(n) - lambda_trial(n)) > 1e-15) ++bad;
  }
  return bad;
}

double lambda_trial(std::uint64_t n) {
  if (n < 2) return 0.0;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    while (n % p == 0) n /= p;
    return n == 1 ? std::log(double(p)) : 0.0;
  }
  return std::log(double(n));
}

double DivisorPowerSum::operator()(double y) {
  if (!(y >= 1.0)) return 0.0;
  auto k = static_cast<std::uint64_t>(std::floor(y));
  if (alpha_ == 0.0) return double(k);
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  CompensatedSum s;
  for (std::uint64_t d = 1; d <= k; ++d) s.add(std::pow(double(d), alpha_));
  double v = s.value();
  memo_.emplace(k, v);
  return v;
}

ArithParams ArithParams::make(double a, double T, double b) {
  if (!(T > 1.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "T must exceed 1");
  if (!(a >= 0.0)) throw Error(ErrorCode::InvalidArgument, "a must be >= 0");
  return from_alpha(a / std::log(T), T, b);
}

ArithParams ArithParams::from_alpha(double alpha, double T, double b) {
  if (!(T > 1.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "T must exceed 1");
  if (!(alpha >= 0.0 && alpha < 0.5)) throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1/2)");
  if (!(b >= 1.0)) throw Error(ErrorCode::InvalidArgument, "b must be >= 1");
  ArithParams p;
  p.T = T;
  p.b = b;
  p.alpha = alpha;
  p.a = alpha * std::log(T);
  p.k = std::log1p(1.0 / T);
  return p;
}

MainTerm::MainTerm(double alpha, Branch branch) : alpha_(alpha) {
  NearOnePair np;
  switch (branch) {
    case Branch::Auto: np = near_one(alpha); break;
    case Branch::Series: np = near_one_series(alpha); break;
    case Branch::Direct: np = near_one_direct(alpha); break;
  }
  r1_ = np.logderiv_regular;
  r2_ = np.zeta_regular;
}

double MainTerm::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  const double L = std::log(x), e = std::exp(alpha_ * L);
  double g = (expm1_over(alpha_, L) - 1.0 - r1_ * e) / (1.0 + alpha_) + r2_;
  return x * g;
}

double MainTerm::increment(double x, double h) const {
  const double L = std::log(x), l = std::log1p(h);
  const double e = std::exp(alpha_ * L);
  const double g1 = (expm1_over(alpha_, L + l) - 1.0 - r1_ * e * std::exp(alpha_ * l)) / (1.0 + alpha_) + r2_;
  const double dg = e * expm1_over(alpha_, l) * (1.0 - alpha_ * r1_) / (1.0 + alpha_);
  return x * (h * g1 + dg);
}

double MainTerm::coeff_main() const {
  if (alpha_ == 0.0) return std::numeric_limits<double>::infinity();
  return (1.0 / alpha_ - r1_) / (1.0 + alpha_);
}

double MainTerm::coeff_linear() const {
  if (alpha_ == 0.0) return -std::numeric_limits<double>::infinity();
  return r2_ - 1.0 / alpha_;
}

double M_alpha(double x, double alpha) { return MainTerm(alpha)(x); }

FAlphaTable::FAlphaTable(const SieveTable& sieve, double alpha, std::uint64_t limit) : alpha_(alpha) {
  if (limit == 0) limit = sieve.limit();
  if (limit > sieve.limit()) throw Error(ErrorCode::SieveTooSmall, "table limit beyond sieve limit");
  std::vector<double> pw(limit + 1, 1.0);
  if (alpha != 0.0)
    for (std::uint64_t d = 1; d <= limit; ++d) pw[d] = std::pow(double(d), alpha);
  std::vector<double> g(limit + 1, 0.0);
  auto pp = sieve.prime_powers();
  auto lg = sieve.prime_power_logs();
  for (std::size_t i = 0; i < pp.size() && pp[i] <= limit; ++i) {
    const std::uint64_t m = pp[i];
    const double L = lg[i];
    for (std::uint64_t d = 1, n = m; n <= limit; ++d, n += m) g[n] += L * pw[d];
  }
  pw.clear();
  pw.shrink_to_fit();
  prefix_.assign(limit + 1, 0.0);
  CompensatedSum s;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    s.add(g[n]);
    prefix_[n] = s.value();
  }
}

double FAlphaTable::f(double x) const {
  if (x < 1.0) return 0.0;
  auto n = static_cast<std::uint64_t>(std::floor(x));
  if (n >= prefix_.size()) throw Error(ErrorCode::SieveTooSmall, "x beyond f_alpha table");
  return prefix_[n];
}

double FAlphaTable::increment(double x, double h) const { return f(x * (1.0 + h)) - f(x); }

double f_alpha(double x, double alpha, const SieveTable& sieve) {
  if (x < 2.0) return 0.0;
  if (x > double(sieve.limit()) + 1.0) throw Error(ErrorCode::SieveTooSmall, "x beyond sieve limit");
  DivisorPowerSum D(alpha);
  CompensatedSum s;
  auto pp = sieve.prime_powers();
  auto lg = sieve.prime_power_logs();
  for (std::size_t i = 0; i < pp.size() && pp[i] <= x; ++i) s.add(lg[i] * D(x / pp[i]));
  return s.value();
}

double discrepancy(double x, const ArithParams& p, const SieveTable& sieve) {
  const double h = 1.0 / p.T;
  const double y = x * (1.0 + h);
  if (y > double(sieve.limit()) + 1.0) throw Error(ErrorCode::SieveTooSmall, "x(1+1/T) beyond sieve limit");
  // Pairs (m, d) with x < m d <= y.
  CompensatedSum s;
  auto lo = static_cast<std::uint64_t>(std::floor(std::max(x, 0.0)));
  auto hi = static_cast<std::uint64_t>(std::floor(y));
  for (std::uint64_t n = lo + 1; n <= hi; ++n) {
    std::uint64_t r = n;
    for (std::uint64_t q = 2; q * q <= r; ++q) {
      if (r % q) continue;
      std::uint64_t pk = 1;
      while (r % q == 0) {
        r /= q;
        pk *= q;
        s.add(sieve.lambda(pk) * std::pow(double(n / pk), p.alpha));
      }
    }
    if (r > 1) s.add(std::log(double(r)) * std::pow(double(n / r), p.alpha));
  }
  MainTerm m(p.alpha);
  return s.value() - (x > 0.0 ? m.increment(x, h) : 0.0);
}

double discrepancy(double x, const ArithParams& p, const FAlphaTable& f, const MainTerm& m) {
  const double h = 1.0 / p.T;
  return f.increment(x, h) - m.increment(x, h);
}

namespace {

struct PieceAcc {
  CompensatedSum value;
  double err = 0.0;
  std::uint64_t pieces = 0;
  std::size_t evals = 0;
  double envelope = 0.0;
};

template <class F>
void integrate_piece(const F& f, double u, double v, double tol, int depth, PieceAcc& acc) {
  detail::Panel<1> p;
  p.a = u;
  p.b = v;
  detail::gk15(f, p);
  acc.evals += 15;
  if (p.err[0] > tol && depth < 30) {
    double m = 0.5 * (u + v);
    integrate_piece(f, u, m, 0.5 * tol, depth + 1, acc);
    integrate_piece(f, m, v, 0.5 * tol, depth + 1, acc);
    return;
  }
  acc.value.add(p.val[0]);
  acc.err += p.err[0];
}

}  // namespace

PiecewiseResult integrate_discrepancy(const ArithParams& p, const FAlphaTable& ftab, double x_lo,
                                      double x_hi, const PiecewiseOptions& opt) {
  if (!(x_lo >= 1.0 && x_hi > x_lo)) throw Error(ErrorCode::InvalidArgument, "need 1 <= x_lo < x_hi");
  const double h = 1.0 / p.T;
  if (x_hi * (1.0 + h) >= double(ftab.limit()) + 1.0)
    throw Error(ErrorCode::SieveTooSmall, "x_hi (1 + 1/T) beyond the f_alpha table");
  const double est = (x_hi - x_lo) * (2.0 + h) * std::ldexp(1.0, opt.refine);
  if (est > double(opt.max_breakpoints))
    throw Error(ErrorCode::TooManyBreakpoints,
                "about " + std::to_string(std::uint64_t(est)) + " pieces; use a smaller b or X_max");
  if (std::fabs(ftab.alpha() - p.alpha) > 1e-15)
    throw Error(ErrorCode::InvalidArgument, "f_alpha table built for a different alpha");

  const MainTerm m(p.alpha);
  const double e = opt.weight_exponent;
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(256, std::size_t(est / 4096) + 1));
  std::vector<PieceAcc> accs(chunks);
  const double span = x_hi - x_lo;
  const int sub = 1 << opt.refine;

  parallel_for(chunks, [&](std::size_t ci) {
    const double c_lo = x_lo + span * double(ci) / double(chunks);
    const double c_hi = ci + 1 == chunks ? x_hi : x_lo + span * double(ci + 1) / double(chunks);
    PieceAcc& acc = accs[ci];
    // Next integer strictly above c_lo, and next n with n/(1+h) strictly above c_lo.
    double na = std::floor(c_lo) + 1.0;
    double nb = std::floor(c_lo * (1.0 + h)) + 1.0;
    double u = c_lo;
    while (u < c_hi) {
      double ca = na, cb = nb / (1.0 + h);
      double v = std::min({ca, cb, c_hi});
      if (ca <= v) na += 1.0;
      if (cb <= v) nb += 1.0;
      if (!(v > u)) continue;
      const double mid = 0.5 * (u + v);
      const double c = ftab.increment(mid, h);
      auto fn = [&](double x) {
        double d = c - m.increment(x, h);
        return std::array<double, 1>{d * d * std::pow(x, -e)};
      };
      const double piece_tol = opt.tol * (v - u) / span;
      for (int j = 0; j < sub; ++j) {
        double a = u + (v - u) * j / sub, b = j + 1 == sub ? v : u + (v - u) * (j + 1) / sub;
        integrate_piece(fn, a, b, piece_tol / sub, 0, acc);
      }
      if (opt.envelope_from > 0.0 && v >= opt.envelope_from) {
        for (double x : {u, v}) {
          double d = c - m.increment(x, h);
          acc.envelope = std::max(acc.envelope, d * d / x);
        }
      }
      ++acc.pieces;
      u = v;
    }
  });

  PiecewiseResult r;
  CompensatedSum total;
  for (auto& a : accs) {
    total.add(a.value.value());
    r.abs_err_est += a.err;
    r.breakpoints += a.pieces;
    r.n_evals += a.evals;
    r.envelope = std::max(r.envelope, a.envelope);
  }
  r.value = total.value();
  if (r.breakpoints > 0) r.breakpoints -= 1;
  return r;
}

VarianceReport J_b(const ArithParams& p, const SieveTable& sieve, double tol, int refine) {
  auto t0 = std::chrono::steady_clock::now();
  const double X = std::pow(p.T, p.b);
  const double need = X * (1.0 + 1.0 / p.T);
  if (need + 1.0 >= double(sieve.limit()))
    throw Error(ErrorCode::SieveTooSmall, "J_b needs a sieve beyond T^b (1 + 1/T)");
  FAlphaTable f(sieve, p.alpha, static_cast<std::uint64_t>(need) + 2);
  PiecewiseOptions opt;
  opt.tol = tol;
  opt.refine = refine;
  opt.weight_exponent = 2.0;
  auto res = integrate_discrepancy(p, f, 1.0, X, opt);
  VarianceReport v;
  v.T = p.T;
  v.a = p.a;
  v.b = p.b;
  v.J = res.value;
  v.normalized = res.value * p.T / std::pow(std::log(p.T), 3);
  v.breakpoint_count = res.breakpoints;
  v.quad_err = res.abs_err_est;
  v.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

}  // namespace zwm
