#include "zwm/zeta_engine.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "zwm/error.hpp"
#include "zwm/numeric.hpp"
#include "stieltjes.inc"

namespace zwm {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr double kRsMinHeight = 100.0;
const cplx kI(0.0, 1.0);

cplx log1p_c(cplx z) {
  double x = z.real(), y = z.imag();
  return {0.5 * std::log1p(x * (2.0 + x) + y * y), std::atan2(y, 1.0 + x)};
}

struct Deriv {
  cplx f;
  cplx df;
  double err = 0.0;
  double derr = 0.0;
  int terms = 0;
};

void validate(ComplexPoint p) {
  if (!std::isfinite(p.sigma) || !std::isfinite(p.t))
    throw Error(ErrorCode::InvalidArgument, "non-finite evaluation point");
  if (std::fabs(p.t) > kMaxHeight)
    throw Error(ErrorCode::HeightOutOfRange, "|t| = " + std::to_string(p.t) + " exceeds 1e6");
  if (p.sigma == 1.0 && p.t == 0.0) throw Error(ErrorCode::PoleAt1, "zeta has a pole at s = 1");
}

void validate_target(double target) {
  if (!(target > 0.0)) throw Error(ErrorCode::InvalidArgument, "target_abs_err must be positive");
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin summation, used at low height and on the real axis.

Deriv euler_maclaurin(cplx s, double target) {
  const double t = std::fabs(s.imag());
  int N = 12 + static_cast<int>(std::ceil((std::abs(s) + 40.0) / kPi));
  for (int attempt = 0; attempt < 5; ++attempt, N *= 2) {
    cplx sum = 0.0, dsum = 0.0;
    double mag = 0.0;
    for (int n = 1; n < N; ++n) {
      double ln = std::log(double(n));
      cplx term = std::exp(-s * ln);
      sum += term;
      dsum -= ln * term;
      mag += std::abs(term) * (1.0 + ln);
    }
    const double lN = std::log(double(N));
    const cplx pN = std::exp(-s * lN);
    const cplx tail = pN * double(N) / (s - 1.0);
    sum += tail + 0.5 * pN;
    dsum += -lN * tail - tail / (s - 1.0) - 0.5 * lN * pN;
    mag += (std::abs(tail) + 0.5 * std::abs(pN)) * (1.0 + lN) + std::abs(tail / (s - 1.0));

    cplx P = s, dP = 1.0;
    cplx npow = pN / double(N);
    const double inv_n2 = 1.0 / (double(N) * double(N));
    double prev = std::numeric_limits<double>::infinity();
    bool ok = false;
    double rem = 0.0, drem = 0.0;
    int k = 1;
    for (; k < 60; ++k) {
      double b = special::bernoulli_over_factorial(k);
      cplx Tk = b * P * npow;
      cplx dTk = b * npow * (dP - lN * P);
      sum += Tk;
      dsum += dTk;
      mag += std::abs(Tk) + std::abs(dTk);

      cplx f1 = s + double(2 * k - 1), f2 = s + double(2 * k);
      cplx nP = P * f1 * f2;
      dP = dP * f1 * f2 + P * (f1 + f2);
      P = nP;
      npow *= inv_n2;
      double bn = special::bernoulli_over_factorial(k + 1);
      double fac = std::abs(s + double(2 * k + 1)) / std::max(s.real() + 2 * k + 1, 1.0);
      double next = std::abs(bn * P * npow);
      rem = next * fac;
      drem = std::abs(bn * npow * (dP - lN * P)) * fac + rem;
      if (rem < 0.01 * target && drem < 0.01 * target) {
        ok = true;
        break;
      }
      if (k > 3 && next > prev) break;
      prev = next;
    }
    if (!ok && attempt < 4) continue;
    double round = 4.0 * kEps * mag * (1.0 + t * lN);
    return {sum, dsum, rem + round, drem + round, N + k};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Riemann-Siegel route: zeta(s) = R(s) + chi(s) conj(R(1 - conj s)) where R is
// the truncated Dirichlet sum minus a contour integral through the saddle
// point c = N + 1/2, evaluated by the trapezoid rule along the 45-degree line.

constexpr double kPoleDistance = 0.35355339059327376;  // 1/(2 sqrt 2)
constexpr std::array<double, 7> kSteps{0.11, 0.1, 0.09, 0.08, 0.07, 0.06, 0.05};
constexpr int kMaxNodes = 160;
constexpr int kMaxTerms = 420;

struct RsGrid {
  double h = 0.0;
  int nodes = 0;
  double trap = 0.0;
  std::array<double, kMaxNodes> u{};
  std::array<cplx, kMaxNodes> uw{};
  std::array<cplx, kMaxNodes> k{};
};

struct RsGrids {
  std::array<RsGrid, kSteps.size()> g;
  std::array<double, kMaxTerms + 1> logn{};
  RsGrids() {
    const cplx omega = std::polar(1.0, kPi / 4.0);
    for (std::size_t i = 0; i < kSteps.size(); ++i) {
      RsGrid& grid = g[i];
      grid.h = kSteps[i];
      grid.trap = std::exp(-kTwoPi * kPoleDistance / grid.h);
      // Integrand decays like exp(-2 pi u^2 + 2.23 |u|); stop far below the
      // trapezoid error.
      double ln_eps = kTwoPi * kPoleDistance / grid.h + 4.6;
      double U = (2.23 + std::sqrt(4.97 + 8.0 * kPi * ln_eps)) / (4.0 * kPi) + 0.1;
      int half = static_cast<int>(std::ceil(U / grid.h));
      grid.nodes = 2 * half + 1;
      for (int j = 0; j < grid.nodes; ++j) {
        double u = (j - half) * grid.h;
        grid.u[j] = u;
        grid.uw[j] = u * omega;
        grid.k[j] = -grid.h * omega * omega / (2.0 * kI * std::cos(kPi * grid.uw[j]));
      }
    }
    for (int n = 1; n <= kMaxTerms; ++n) logn[n] = std::log(double(n));
  }
};

const RsGrids& rs_grids() {
  static const RsGrids grids;
  return grids;
}

// R and R' on the line Im s = t at sigma = 1/2 + delta, 1/2 - delta and 1/2.
struct RsSums {
  std::array<cplx, 3> R{};
  std::array<cplx, 3> dR{};
  std::array<double, 3> mag{};
  double trap = 0.0;
  double c = 0.0;
  int terms = 0;
};

RsSums rs_sums(double t, double delta, double target, bool want_half) {
  const RsGrids& G = rs_grids();
  const int N = static_cast<int>(std::floor(std::sqrt(t / kTwoPi)));
  const double c = N + 0.5;
  const double logc = std::log(c);

  double smin = std::min(0.5 - std::fabs(delta), 0.5);
  double scale = 2.0 * std::exp(-smin * logc) * (1.0 + logc);
  std::size_t level = 0;
  while (level + 1 < kSteps.size() && 2.0 * G.g[level].trap * scale > 0.5 * target) ++level;
  const RsGrid& grid = G.g[level];

  RsSums out;
  out.c = c;
  out.trap = 2.0 * grid.trap * scale;
  out.terms = N + grid.nodes;

  // Dirichlet part.
  for (int n = 1; n <= N; ++n) {
    double ln = G.logn[n];
    cplx ph = std::polar(1.0, -t * ln);
    double half = std::exp(-0.5 * ln);
    double up = std::exp(-delta * ln);
    double a0 = half * up, a1 = half / up;
    cplx v0 = a0 * ph, v1 = a1 * ph;
    out.R[0] += v0;
    out.dR[0] -= ln * v0;
    out.R[1] += v1;
    out.dR[1] -= ln * v1;
    out.mag[0] += a0 * (1.0 + ln);
    out.mag[1] += a1 * (1.0 + ln);
    if (want_half) {
      out.R[2] += half * ph;
      out.mag[2] += half;
    }
  }

  // Remainder integral.
  const double sign = (N % 2 == 0) ? 1.0 : -1.0;
  const cplx cs_half = std::exp(cplx(-0.5 * logc, -t * logc));
  const double cdelta = std::exp(-delta * logc);
  const cplx cs0 = cs_half * cdelta, cs1 = cs_half / cdelta;
  cplx r0 = 0.0, r1 = 0.0, r2 = 0.0, d0 = 0.0, d1 = 0.0;
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int j = 0; j < grid.nodes; ++j) {
    const double u = grid.u[j];
    const cplx L = log1p_c(grid.uw[j] / c);
    const cplx E = -kI * t * L + kI * (kTwoPi * c) * grid.uw[j] - kPi * u * u - 0.5 * L;
    const cplx W = sign * grid.k[j] * std::exp(E);
    const cplx B = std::exp(-delta * L);
    const cplx w0 = W * B, w1 = W / B;
    const cplx lx = logc + L;
    r0 += w0;
    r1 += w1;
    d0 -= w0 * lx;
    d1 -= w1 * lx;
    m0 += std::abs(w0);
    m1 += std::abs(w1);
    if (want_half) {
      r2 += W;
      m2 += std::abs(W);
    }
  }
  out.R[0] += cs0 * r0;
  out.R[1] += cs1 * r1;
  out.dR[0] += cs0 * d0;
  out.dR[1] += cs1 * d1;
  out.mag[0] += std::abs(cs0) * m0 * (1.0 + logc);
  out.mag[1] += std::abs(cs1) * m1 * (1.0 + logc);
  if (want_half) {
    out.R[2] += cs_half * r2;
    out.mag[2] += std::abs(cs_half) * m2;
  }
  return out;
}

double rounding(double t, double c, double mag) { return 4.0 * kEps * mag * (4.0 + t * std::log(c + 1.0)); }

// chi(s) as log value, valid for all s off the Gamma poles.
cplx log_chi(cplx s) {
  return s * std::log(2.0) + (s - 1.0) * std::log(kPi) + special::log_sin(0.5 * kPi * s) +
         special::lgamma(1.0 - s);
}

cplx chi_value(cplx s) {
  if (s.imag() == 0.0) {
    double x = s.real();
    if (x > 0.5) {
      // (2 pi)^s / (2 Gamma(s) cos(pi s / 2)); finite at even integers.
      if (x == std::floor(x) && static_cast<long long>(x) % 2 == 1)
        throw Error(ErrorCode::PoleOfGamma, "chi has a pole at odd positive integer s");
      return std::pow(kTwoPi, x) / (2.0 * std::tgamma(x) * std::cos(0.5 * kPi * x));
    }
    if (x <= 0.0 && x == std::floor(x) && static_cast<long long>(-x) % 2 == 0) return 0.0;
  }
  return std::exp(log_chi(s));
}

Deriv rs_zeta(ComplexPoint p, double target, bool want_deriv) {
  const double t = p.t;
  const double delta = p.sigma - 0.5;
  RsSums S = rs_sums(t, delta, target, false);
  const cplx s = p.s();
  const cplx X = std::exp(log_chi(s));
  const cplx G = std::conj(S.R[1]);
  Deriv d;
  d.f = S.R[0] + X * G;
  const double ax = std::abs(X);
  const double base = S.trap + rounding(t, S.c, S.mag[0] + ax * S.mag[1]);
  const double chi_rel = 4.0 * kEps * (t * std::log(t) + 10.0);
  d.err = base + chi_rel * ax * std::abs(G);
  d.terms = S.terms;
  if (want_deriv) {
    cplx lc = chi_log_deriv(p);
    d.df = S.dR[0] + X * (lc * G - std::conj(S.dR[1]));
    d.derr = d.err * (2.0 + std::abs(lc));
  }
  return d;
}

Deriv eval_zeta(ComplexPoint p, double target, bool want_deriv) {
  validate(p);
  validate_target(target);
  if (p.t < 0.0) {
    Deriv d = eval_zeta({p.sigma, -p.t}, target, want_deriv);
    d.f = std::conj(d.f);
    d.df = std::conj(d.df);
    return d;
  }
  if (p.t >= kRsMinHeight && p.sigma > -2.0 && p.sigma < 3.0) return rs_zeta(p, target, want_deriv);
  return euler_maclaurin(p.s(), target);
}

}  // namespace

EvalResult zeta(ComplexPoint s, double target_abs_err) {
  Deriv d = eval_zeta(s, target_abs_err, false);
  return {d.f, d.err, std::max(d.terms, 1)};
}

EvalResult zeta_prime(ComplexPoint s, double target_abs_err, bool self_check) {
  Deriv d = eval_zeta(s, target_abs_err, true);
  EvalResult r{d.df, d.derr, std::max(d.terms, 1)};
  if (self_check) {
    EvalResult c = zeta_prime_cauchy(s, target_abs_err);
    double gap = std::abs(c.value - r.value);
    if (gap > r.abs_error_bound + c.abs_error_bound)
      throw Error(ErrorCode::SelfCheckFailed,
                  "differentiated sum and Cauchy circle disagree by " + std::to_string(gap));
  }
  return r;
}

EvalResult zeta_prime_cauchy(ComplexPoint s, double target_abs_err, double radius, int nodes) {
  validate(s);
  validate_target(target_abs_err);
  if (std::abs(s.s() - 1.0) <= 2.0 * radius)
    throw Error(ErrorCode::PoleAt1, "Cauchy circle would enclose s = 1");
  cplx acc = 0.0;
  double max_err = 0.0, max_abs = 0.0;
  int terms = 0;
  for (int m = 0; m < nodes; ++m) {
    cplx e = std::polar(1.0, kTwoPi * m / nodes);
    cplx z = s.s() + radius * e;
    Deriv d = eval_zeta({z.real(), z.imag()}, std::max(target_abs_err * radius, 1e-16), false);
    acc += d.f / e;
    max_err = std::max(max_err, d.err);
    max_abs = std::max(max_abs, std::abs(d.f));
    terms += d.terms;
  }
  cplx value = acc / (double(nodes) * radius);
  // Aliasing from the next Taylor coefficient is ~ radius^nodes and negligible.
  double bound = (max_err + 8.0 * kEps * max_abs) / radius;
  return {value, bound, terms};
}

EvalResult log_deriv(ComplexPoint s, double target_abs_err, double floor) {
  Deriv d = eval_zeta(s, target_abs_err, true);
  double mod = std::abs(d.f);
  if (mod < floor) throw NearZeroSingularity(mod);
  cplx v = d.df / d.f;
  double bound = (d.derr + std::abs(v) * d.err) / std::max(mod - d.err, mod * 0.5);
  return {v, bound, std::max(d.terms, 1)};
}

EvalResult chi(ComplexPoint s) {
  if (!std::isfinite(s.sigma) || !std::isfinite(s.t))
    throw Error(ErrorCode::InvalidArgument, "non-finite evaluation point");
  cplx v = chi_value(s.s());
  double at = std::fabs(s.t);
  double rel = 8.0 * kEps * (at * std::log(at + 2.0) + 10.0);
  return {v, rel * std::abs(v), 1};
}

cplx chi_log_deriv(ComplexPoint p) {
  cplx s = p.s();
  return kLogTwoPi + 0.5 * kPi * special::cot(0.5 * kPi * s) - special::digamma(1.0 - s);
}

double theta_asymptotic(double t) {
  if (t < 0.0) return -theta_asymptotic(-t);
  // (1 - 2^{1-2k}) |B_2k| / (4k (2k-1)) for k = 1..8.
  static constexpr std::array<double, 8> coef{
      1.0 / 48.0,
      7.0 / 5760.0,
      31.0 / 80640.0,
      127.0 / 430080.0,
      511.0 / 1216512.0,
      1414477.0 / 1476034560.0,
      8191.0 / 2555904.0,
      118518239.0 / 8021606400.0};
  double inv = 1.0 / t, inv2 = inv * inv;
  double series = 0.0, pw = inv;
  for (double c : coef) {
    series += c * pw;
    pw *= inv2;
  }
  return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 + series;
}

double theta_loggamma(double t) {
  return special::lgamma(cplx(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(kPi);
}

double theta(double t) {
  if (std::fabs(t) >= 10.0) return theta_asymptotic(t);
  return theta_loggamma(t);
}

double hardy_z(double t, double target_abs_err) {
  validate({0.5, t});
  validate_target(target_abs_err);
  if (t < 0.0) return hardy_z(-t, target_abs_err);
  const double th = theta(t);
  if (t >= kRsMinHeight) {
    RsSums S = rs_sums(t, 0.0, target_abs_err, true);
    return 2.0 * (std::polar(1.0, th) * S.R[2]).real();
  }
  Deriv d = euler_maclaurin(cplx(0.5, t), target_abs_err);
  return (std::polar(1.0, th) * d.f).real();
}

LineSample sample_line(double sigma, double t, double target_abs_err) {
  validate({sigma, t});
  validate_target(target_abs_err);
  if (t < 0.0) {
    LineSample r = sample_line(sigma, -t, target_abs_err);
    r.zeta_shift = std::conj(r.zeta_shift);
    r.dzeta_shift = std::conj(r.dzeta_shift);
    r.zeta_half = std::conj(r.zeta_half);
    return r;
  }
  LineSample out;
  if (t < kRsMinHeight || sigma <= -2.0 || sigma >= 3.0) {
    Deriv a = euler_maclaurin(cplx(sigma, t), target_abs_err);
    Deriv b = euler_maclaurin(cplx(0.5, t), target_abs_err);
    out.zeta_shift = a.f;
    out.dzeta_shift = a.df;
    out.zeta_half = b.f;
    out.abs_error_bound = std::max({a.err, a.derr, b.err});
    return out;
  }
  const double delta = sigma - 0.5;
  RsSums S = rs_sums(t, delta, target_abs_err, true);
  const cplx s(sigma, t);
  const cplx X = std::exp(log_chi(s));
  const cplx G = std::conj(S.R[1]);
  const cplx lc = chi_log_deriv({sigma, t});
  out.zeta_shift = S.R[0] + X * G;
  out.dzeta_shift = S.dR[0] + X * (lc * G - std::conj(S.dR[1]));
  const cplx ph = std::polar(1.0, -2.0 * theta(t));
  out.zeta_half = S.R[2] + ph * std::conj(S.R[2]);
  const double ax = std::abs(X);
  const double chi_rel = 4.0 * kEps * (t * std::log(t) + 10.0);
  double e0 = S.trap + rounding(t, S.c, S.mag[0] + ax * S.mag[1]) + chi_rel * ax * std::abs(G);
  double e2 = S.trap + rounding(t, S.c, 2.0 * S.mag[2]);
  out.abs_error_bound = std::max(e0 * (2.0 + std::abs(lc)), e2);
  return out;
}

// ---------------------------------------------------------------------------
// Near s = 1.

NearOnePair near_one_series(double alpha) {
  // zeta(1 + x) = 1/x + A(x) with A(x) = sum (-1)^n gamma_n x^n / n!.
  constexpr int kOrder = 8;
  double A = 0.0, dA = 0.0, Z = 0.0;
  double fact = 1.0;
  for (int n = 0; n <= kOrder; ++n) {
    if (n > 0) fact *= n;
    double g = kStieltjes[n];
    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    A += sgn * g * std::pow(alpha, n) / fact;
    if (n > 0) dA += sgn * g * n * std::pow(alpha, n - 1) / fact;
    Z += g * std::pow(alpha, n) / fact;
  }
  NearOnePair r;
  r.alpha = alpha;
  r.series_branch = true;
  r.logderiv_regular = (A + alpha * dA) / (1.0 + alpha * A);
  r.zeta_regular = Z;
  if (alpha == 0.0) {
    r.logderiv_at_1_plus_alpha = -std::numeric_limits<double>::infinity();
    r.zeta_at_1_minus_alpha = -std::numeric_limits<double>::infinity();
  } else {
    r.logderiv_at_1_plus_alpha = r.logderiv_regular - 1.0 / alpha;
    r.zeta_at_1_minus_alpha = r.zeta_regular - 1.0 / alpha;
  }
  return r;
}

NearOnePair near_one_direct(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::AlphaOutOfRange, "direct branch needs alpha > 0");
  Deriv up = euler_maclaurin(cplx(1.0 + alpha, 0.0), 1e-15);
  Deriv down = euler_maclaurin(cplx(1.0 - alpha, 0.0), 1e-15);
  NearOnePair r;
  r.alpha = alpha;
  r.logderiv_at_1_plus_alpha = (up.df / up.f).real();
  r.zeta_at_1_minus_alpha = down.f.real();
  r.logderiv_regular = r.logderiv_at_1_plus_alpha + 1.0 / alpha;
  r.zeta_regular = r.zeta_at_1_minus_alpha + 1.0 / alpha;
  return r;
}

NearOnePair near_one(double alpha) {
  if (!(alpha >= 0.0 && alpha < 0.5))
    throw Error(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1/2)");
  if (alpha < kNearOneThreshold) return near_one_series(alpha);
  return near_one_direct(alpha);
}

}  // namespace zwm
