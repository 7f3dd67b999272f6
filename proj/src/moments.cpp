#include "zwm/moments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "zwm/closed_forms.hpp"
#include "zwm/error.hpp"
#include "zwm/numeric.hpp"
#include "zwm/zeta_engine.hpp"

namespace zwm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double nearest_distance(std::span<const double> sorted, double x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  double d = std::numeric_limits<double>::infinity();
  if (it != sorted.end()) d = *it - x;
  if (it != sorted.begin()) d = std::min(d, x - *(it - 1));
  return d;
}

void require_table(const ShiftParams& sp, const ZeroTable& zeros) {
  if (!zeros.certified())
    throw Error(ErrorCode::UncertifiedZeros, "moment integrals need a certified zero table");
  double lo = sp.T - kRecommendedMargin, hi = 2.0 * sp.T + kRecommendedMargin;
  if (!zeros.covers(lo, hi)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "zero table [%g, %g] does not cover [%g, %g]", zeros.t_lo(),
                  zeros.t_hi(), lo, hi);
    throw Error(ErrorCode::UncertifiedZeros, buf);
  }
}

double sinc(double x) {
  if (std::fabs(x) < 1e-4) return 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
  return std::sin(x) / x;
}

MomentOptions with_tol(double tol) {
  MomentOptions o;
  o.tol = tol;
  return o;
}

}  // namespace

ShiftParams ShiftParams::make(double a, double T) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "a must be >= 0");
  if (!(T >= 100.0) || !std::isfinite(T)) throw Error(ErrorCode::InvalidArgument, "T must be >= 100");
  ShiftParams p;
  p.a = a;
  p.T = T;
  p.log_T = std::log(T);
  p.delta = a / p.log_T;
  p.sigma = 0.5 + p.delta;
  p.in_sandwich_range = a <= 1.0 && a >= std::pow(p.log_T, -0.25);
  return p;
}

MomentReport make_report(std::string kind, const ShiftParams& sp, double raw, int p,
                         const QuadResult& q) {
  MomentReport r;
  r.kind = std::move(kind);
  r.a = sp.a;
  r.T = sp.T;
  r.raw = raw;
  r.p = p;
  r.normalized = raw / (sp.T * std::pow(sp.log_T, p));
  r.quad = q;
  return r;
}

QuadResult MomentSweep::component(MomentComponent c) const {
  QuadResult r;
  r.value = quad.value[c];
  r.abs_err_est = quad.abs_err_est[c];
  r.n_evals = quad.n_evals;
  r.max_depth_hit = quad.max_depth_hit;
  r.panels = quad.panels;
  return r;
}

MomentSample moment_integrand(const ShiftParams& sp, double t, const LorentzKernel* kernel,
                              double zeta_target) {
  LineSample ls = sample_line(sp.sigma, t, zeta_target);
  cplx w = ls.dzeta_shift / ls.zeta_shift;
  double zh2 = std::norm(ls.zeta_half);
  double w2 = std::norm(w);
  cplx wsq = w * w;
  MomentSample out{};
  out[kWeighted] = w2 * zh2;
  out[kUnweighted] = w2;
  out[kZetaPrime] = std::norm(ls.dzeta_shift);
  out[kI1] = w.real() * std::log(t / kTwoPi) * zh2;
  out[kI2Re] = wsq.real() * zh2;
  out[kI2Im] = wsq.imag() * zh2;
  if (kernel) {
    double K = (*kernel)(t);
    out[kSFull] = K * K * zh2;
    out[kSDiag] = kernel->diagonal(t, sp.T, 2.0 * sp.T, false) * zh2;
    out[kSDiagNear] = kernel->diagonal(t, sp.T, 2.0 * sp.T, true) * zh2;
  }
  return out;
}

std::vector<std::pair<double, double>> moment_panels(const ShiftParams& sp, const ZeroTable& zeros) {
  const double lo = sp.T, hi = 2.0 * sp.T, d = sp.delta;
  std::span<const double> near = zeros.in_range(lo - 2.0 * d, hi + 2.0 * d);
  std::vector<double> cuts;
  cuts.reserve(5 * near.size());
  for (double g : near)
    for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      double c = g + k * d;
      if (c > lo && c < hi) cuts.push_back(c);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double fine = d > 0.0 ? std::min(0.25, 0.5 * d) : 0.25;
  std::vector<std::pair<double, double>> panels;
  double x0 = lo;
  auto emit = [&](double a, double b) {
    double m = 0.5 * (a + b);
    double cap = nearest_distance(near, m) <= 2.0 * d ? fine : 0.5;
    int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / cap)));
    for (int j = 0; j < pieces; ++j) {
      double u = a + (b - a) * j / pieces;
      double v = j + 1 == pieces ? b : a + (b - a) * (j + 1) / pieces;
      panels.emplace_back(u, v);
    }
  };
  for (double c : cuts) {
    if (c - x0 > 1e-12 * sp.T) {
      emit(x0, c);
      x0 = c;
    }
  }
  emit(x0, hi);
  return panels;
}

MomentSweep moment_sweep(const ShiftParams& sp, const ZeroTable& zeros, const MomentOptions& opt) {
  if (!(sp.a > 0.0)) throw Error(ErrorCode::InvalidArgument, "moment integrals need a > 0");
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  require_table(sp, zeros);
  auto t0 = Clock::now();
  LorentzKernel kernel(zeros, sp.delta, opt.kernel_window);
  auto panels = moment_panels(sp, zeros);
  const double scale3 = sp.T * std::pow(sp.log_T, 3), scale2 = sp.T * sp.log_T * sp.log_T;
  std::array<double, kNumComponents> tol_abs{}, tol_rel{};
  for (std::size_t i = 0; i < kNumComponents; ++i) {
    tol_rel[i] = opt.tol;
    tol_abs[i] = 1e-2 * opt.tol * (i == kUnweighted ? scale2 : scale3);
  }
  auto f = [&](double t) { return moment_integrand(sp, t, &kernel, opt.zeta_target); };
  MomentSweep s;
  s.params = sp;
  s.quad = integrate_panels<kNumComponents>(f, panels, tol_abs, tol_rel, opt.quad);
  s.runtime_s = seconds_since(t0);
  return s;
}

MomentReport weighted_moment(const MomentSweep& s) {
  auto r = make_report("weighted", s.params, s.quad.value[kWeighted], 3, s.component(kWeighted));
  r.prediction = eval_formula(FormulaId::F_PRED, s.params.a);
  r.lower = eval_formula(FormulaId::F1, s.params.a);
  r.upper = eval_formula(FormulaId::F2, s.params.a);
  r.runtime_s = s.runtime_s;
  return r;
}

MomentReport unweighted_moment(const MomentSweep& s) {
  auto r = make_report("unweighted", s.params, s.quad.value[kUnweighted], 2, s.component(kUnweighted));
  double g = eval_formula(FormulaId::GGM_UNWEIGHTED, s.params.a);
  r.prediction = g;
  // 2a times the normalized value should sit between 1 and 4/3.
  r.lower = 1.0 / (2.0 * s.params.a);
  r.upper = 4.0 / 3.0 / (2.0 * s.params.a);
  r.runtime_s = s.runtime_s;
  return r;
}

MomentReport zetaprime_moment(const MomentSweep& s) {
  auto r = make_report("zetaprime", s.params, s.quad.value[kZetaPrime], 3, s.component(kZetaPrime));
  r.prediction = r.lower = r.upper = eval_formula(FormulaId::INGHAM_MAIN, s.params.a);
  r.runtime_s = s.runtime_s;
  return r;
}

MomentReport i1_numeric(const MomentSweep& s) {
  auto r = make_report("i1", s.params, s.quad.value[kI1], 3, s.component(kI1));
  r.prediction = r.lower = r.upper = eval_formula(FormulaId::I1_MAIN, s.params.a);
  r.runtime_s = s.runtime_s;
  return r;
}

MomentReport i2_numeric(const MomentSweep& s) {
  auto r = make_report("i2", s.params, s.quad.value[kI2Re], 3, s.component(kI2Re));
  r.prediction = r.lower = r.upper = eval_formula(FormulaId::I2_MAIN, s.params.a);
  r.runtime_s = s.runtime_s;
  return r;
}

MomentReport s_weighted(const MomentSweep& s, SMode mode) {
  MomentComponent c = mode == SMode::Full ? kSFull : mode == SMode::Diagonal ? kSDiag : kSDiagNear;
  const char* kind = mode == SMode::Full ? "s_full" : mode == SMode::Diagonal ? "s_diag" : "s_diag_near";
  auto r = make_report(kind, s.params, s.quad.value[c], 3, s.component(c));
  double diag = eval_formula(FormulaId::DIAG_MAIN, s.params.a);
  r.prediction = diag;
  r.lower = diag;
  r.upper = std::numeric_limits<double>::infinity();
  r.runtime_s = s.runtime_s;
  return r;
}

MomentReport weighted_moment(const ShiftParams& sp, const ZeroTable& zeros, double tol) {
  return weighted_moment(moment_sweep(sp, zeros, with_tol(tol)));
}
MomentReport unweighted_moment(const ShiftParams& sp, const ZeroTable& zeros, double tol) {
  return unweighted_moment(moment_sweep(sp, zeros, with_tol(tol)));
}
MomentReport s_weighted(const ShiftParams& sp, const ZeroTable& zeros, double tol, SMode mode) {
  return s_weighted(moment_sweep(sp, zeros, with_tol(tol)), mode);
}
MomentReport i2_numeric(const ShiftParams& sp, const ZeroTable& zeros, double tol) {
  return i2_numeric(moment_sweep(sp, zeros, with_tol(tol)));
}

MomentReport zetaprime_moment(const ShiftParams& sp, double tol, double zeta_target) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  auto t0 = Clock::now();
  auto panels = make_panels(sp.T, 2.0 * sp.T, {}, 0.5);
  auto f = [&](double t) {
    return std::array<double, 1>{std::norm(zeta_prime({sp.sigma, t}, zeta_target).value)};
  };
  double scale = sp.T * std::pow(sp.log_T, 3);
  auto v = integrate_panels<1>(f, panels, {1e-2 * tol * scale}, {tol});
  QuadResult q;
  q.value = v.value[0];
  q.abs_err_est = v.abs_err_est[0];
  q.n_evals = v.n_evals;
  q.max_depth_hit = v.max_depth_hit;
  q.panels = v.panels;
  auto r = make_report("zetaprime", sp, q.value, 3, q);
  r.prediction = r.lower = r.upper = eval_formula(FormulaId::INGHAM_MAIN, sp.a);
  r.runtime_s = seconds_since(t0);
  return r;
}

Lemma22Report lemma22_identity_check(const MomentSweep& s) {
  const auto& sp = s.params;
  const auto& v = s.quad.value;
  const double scale3 = sp.T * std::pow(sp.log_T, 3);
  Lemma22Report r;
  r.lhs = v[kWeighted];
  r.rhs = scale3 * eval_formula(FormulaId::LEMMA22_MAIN, sp.a) + 2.0 * v[kSFull];
  r.residual_ratio = (r.lhs - r.rhs) / (sp.T * sp.log_T * sp.log_T);
  r.i1_ratio = v[kI1] / (scale3 * eval_formula(FormulaId::I1_MAIN, sp.a));
  r.i2_ratio = v[kI2Re] / (scale3 * eval_formula(FormulaId::I2_MAIN, sp.a));
  r.i2_imag_fraction = std::fabs(v[kI2Im]) / std::fabs(v[kI2Re]);
  r.full_over_diag = v[kSFull] / v[kSDiag];
  r.near_truncation_over_T = (v[kSDiag] - v[kSDiagNear]) / sp.T;
  return r;
}

double pointwise_split_residual(const ShiftParams& sp, const std::vector<double>& ts) {
  double worst = 0.0;
  for (double t : ts) {
    cplx w = log_deriv({sp.sigma, t}, 1e-12).value;
    double lhs = std::norm(w);
    double rhs = 2.0 * w.real() * w.real() - (w * w).real();
    worst = std::max(worst, std::fabs(lhs - rhs) / lhs);
  }
  return worst;
}

std::vector<double> seeded_heights(std::size_t n, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& t : out) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    t = lo + (hi - lo) * u;
  }
  return out;
}

RatioReport soundararajan_ratio_check(const ShiftParams& sp, const std::vector<double>& ts, double c) {
  RatioReport r;
  r.a = sp.a;
  r.T = sp.T;
  r.c = c;
  r.bound = std::exp(0.5 * sp.a) * (1.0 + c / sp.log_T);
  r.samples = ts.size();
  std::vector<double> ratio(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    double num = std::abs(zeta({0.5, ts[i]}, 1e-12).value);
    double den = sp.a == 0.0 ? num : std::abs(zeta({sp.sigma, ts[i]}, 1e-12).value);
    ratio[i] = num == den ? 1.0 : num / den;
  });
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ratio[i] > r.max_ratio) {
      r.max_ratio = ratio[i];
      r.argmax_t = ts[i];
    }
    if (!(ratio[i] <= r.bound)) ++r.violations;
  }
  return r;
}

GonekReport gonek_discrete(double x, double T, const ZeroTable& zeros) {
  if (!(T >= 100.0)) throw Error(ErrorCode::InvalidArgument, "T must be >= 100");
  if (!zeros.covers(T, 2.0 * T))
    throw Error(ErrorCode::UncertifiedZeros, "zero table does not cover [T, 2T]");
  GonekReport r;
  r.x = x;
  r.T = T;
  auto g = zeros.in_range(T, 2.0 * T);
  r.zeros_used = g.size();
  std::vector<double> vals(g.size());
  parallel_for(g.size(), [&](std::size_t i) { vals[i] = std::norm(zeta({0.5, g[i] + x}, 1e-10).value); }, 64);
  CompensatedSum sum;
  for (double v : vals) sum.add(v);
  r.lhs = sum.value();
  const double L = std::log(T);
  const double s = sinc(0.5 * x * L);
  r.rhs = T * L * L / kTwoPi * (1.0 - s * s);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
  auto local = [x](double t) {
    double l = std::log(t / kTwoPi);
    double q = sinc(0.5 * x * l);
    return l * l / kTwoPi * (1.0 - q * q);
  };
  r.rhs_local = integrate(local, T, 2.0 * T, 1e-9 * T * L * L).value;
  return r;
}

double pair_correlation_density_integral(double a_lo, double a_hi) {
  if (!(a_hi > a_lo)) throw Error(ErrorCode::InvalidArgument, "window needs a_lo < a_hi");
  auto f = [](double u) {
    double s = sinc(kPi * u);
    return 1.0 - s * s;
  };
  return integrate(f, a_lo, a_hi, 1e-14).value;
}

PairCorrelationReport pair_correlation(const ZeroTable& zeros, double a_lo, double a_hi, double T,
                                       bool local_density) {
  if (!(a_hi > a_lo)) throw Error(ErrorCode::InvalidArgument, "window needs a_lo < a_hi");
  if (!(T > 2.0 * kPi)) throw Error(ErrorCode::InvalidArgument, "T must exceed 2 pi");
  PairCorrelationReport r;
  r.a_lo = a_lo;
  r.a_hi = a_hi;
  r.T = T;
  auto g = zeros.in_range(0.0, T);
  r.n_zeros = g.size();
  const double log_T = std::log(T);
  // Normalized gap; monotone in the raw gap for fixed i, so the scans below may stop early.
  auto gap = [&](std::size_t i, std::size_t j) {
    double d = g[i] - g[j];
    double L = local_density ? std::log(0.5 * (g[i] + g[j]) / kTwoPi) : log_T;
    return d * L / kTwoPi;
  };
  const double reach = std::max(std::fabs(a_lo), std::fabs(a_hi));
  std::size_t pairs = 0;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j-- > 0;) {
      double u = gap(i, j);
      if (u >= a_hi || u > 2.0 * reach + 1.0) break;
      if (u > a_lo) ++pairs;
    }
    if (a_lo < 0.0 && 0.0 < a_hi) ++pairs;
    for (std::size_t j = i + 1; j < n; ++j) {
      double u = gap(i, j);
      if (u <= a_lo || u < -2.0 * reach - 1.0) break;
      if (u < a_hi) ++pairs;
    }
  }
  r.pairs = pairs;
  r.statistic = n ? double(pairs) / double(n) : 0.0;
  r.prediction = pair_correlation_density_integral(a_lo, a_hi) + (a_lo < 0.0 && 0.0 < a_hi ? 1.0 : 0.0);
  return r;
}

}  // namespace zwm
