#include "zwm/plancherel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "zwm/closed_forms.hpp"
#include "zwm/error.hpp"
#include "zwm/numeric.hpp"
#include "zwm/zeta_engine.hpp"

namespace zwm {

namespace {

std::vector<double> normalized_ladder(std::vector<double> ladder, double top) {
  ladder.push_back(top);
  std::sort(ladder.begin(), ladder.end());
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
  while (!ladder.empty() && ladder.back() > top) ladder.pop_back();
  return ladder;
}

}  // namespace

const char* kernel_name(KernelKind k) { return k == KernelKind::Exact ? "exact" : "sine"; }

SideResult plancherel_lhs(const ArithParams& p, const FAlphaTable& f, double X_max, double tol,
                          std::vector<double> ladder) {
  if (!(X_max > 1.0)) throw Error(ErrorCode::InvalidArgument, "X_max must exceed 1");
  auto steps = normalized_ladder(std::move(ladder), X_max);
  SideResult r;
  CompensatedSum acc;
  double lo = 1.0;
  for (double x : steps) {
    if (x <= lo) {
      r.ladder.emplace_back(x, acc.value());
      continue;
    }
    PiecewiseOptions opt;
    opt.tol = tol * (x - lo) / (X_max - 1.0);
    opt.weight_exponent = 2.0 + 2.0 * p.alpha;
    opt.envelope_from = 0.5 * X_max;
    auto seg = integrate_discrepancy(p, f, lo, x, opt);
    acc.add(seg.value);
    r.abs_err_est += seg.abs_err_est;
    r.n_evals += seg.n_evals;
    r.breakpoints += seg.breakpoints;
    if (x == X_max) {
      double env = seg.envelope;
      r.tail_bound = p.alpha > 0.0 ? env * std::pow(X_max, -2.0 * p.alpha) / (2.0 * p.alpha)
                                   : std::numeric_limits<double>::infinity();
    }
    r.ladder.emplace_back(x, acc.value());
    lo = x;
  }
  r.value = acc.value();
  return r;
}

double plancherel_kernel(const ArithParams& p, double t, KernelKind kind) {
  const double k = p.k;
  if (kind == KernelKind::Sine) {
    double x = 0.5 * k * t;
    double s = std::fabs(x) < 1e-6 ? 0.5 * k * (1.0 - x * x / 6.0) : std::sin(x) / t;
    return 4.0 / kPi * s * s;
  }
  const double sigma = 0.5 + p.alpha;
  const double kt = k * t;
  const double sh = std::sin(0.5 * kt);
  const double re = std::expm1(k * sigma) * std::cos(kt) - 2.0 * sh * sh;
  const double im = std::exp(k * sigma) * std::sin(kt);
  return (re * re + im * im) / (sigma * sigma + t * t) / kPi;
}

std::array<double, 2> plancherel_integrand(const ArithParams& p, double t, double zeta_target) {
  LineSample ls = sample_line(0.5 + p.alpha, t, zeta_target);
  double w2 = std::norm(ls.dzeta_shift / ls.zeta_shift);
  double base = w2 * std::norm(ls.zeta_half);
  return {base * plancherel_kernel(p, t, KernelKind::Exact), base * plancherel_kernel(p, t, KernelKind::Sine)};
}

double rhs_block_bound(const ArithParams& p, double B, KernelKind kind, double safety) {
  const double logB = std::log(B);
  const double a_B = p.alpha * logB;
  double kmax;
  if (kind == KernelKind::Sine) {
    kmax = 4.0 / kPi * std::min(0.25 * p.k * p.k, 1.0 / (B * B));
  } else {
    double e = std::exp(p.k * (0.5 + p.alpha));
    kmax = std::pow(std::min(std::expm1(p.k * (0.5 + p.alpha)) + 2.0 * e * p.k * B, 1.0 + e), 2) /
           (B * B) / kPi;
  }
  double moment = a_B > 0.0 ? eval_formula(FormulaId::F2, a_B) * B * logB * logB * logB
                            : std::numeric_limits<double>::infinity();
  return safety * kmax * moment;
}

double rhs_tail_bound(const ArithParams& p, double t_max, KernelKind kind, double safety) {
  CompensatedSum s;
  for (int j = 0; j < 400; ++j) {
    double term = rhs_block_bound(p, std::ldexp(t_max, j), kind, safety);
    if (!std::isfinite(term)) return term;
    s.add(term);
    if (term < 1e-14 * s.value()) break;
  }
  return s.value();
}

std::array<QuadResult, 2> plancherel_rhs_segment(const ArithParams& p, const ZeroTable& zeros, double lo,
                                                 double hi, const RhsOptions& opt) {
  if (!(hi > lo && lo >= 0.0)) throw Error(ErrorCode::InvalidArgument, "segment needs 0 <= lo < hi");
  std::vector<double> bps;
  for (double g : zeros.in_range(lo - p.alpha, hi + p.alpha))
    for (double c : {g - p.alpha, g, g + p.alpha})
      if (c > lo && c < hi) bps.push_back(c);
  std::sort(bps.begin(), bps.end());
  auto panels = make_panels(lo, hi, bps, 0.5);
  auto f = [&](double t) { return plancherel_integrand(p, t, opt.zeta_target); };
  auto v = integrate_panels<2>(f, panels, {0.0, 0.0}, {opt.tol, opt.tol}, opt.quad);
  std::array<QuadResult, 2> out;
  for (int i = 0; i < 2; ++i) {
    out[i].value = v.value[i];
    out[i].abs_err_est = v.abs_err_est[i];
    out[i].n_evals = v.n_evals;
    out[i].max_depth_hit = v.max_depth_hit;
    out[i].panels = v.panels;
  }
  return out;
}

SideResult plancherel_rhs(const ArithParams& p, const ZeroTable& zeros, double t_max, const RhsOptions& opt,
                          std::vector<double> ladder) {
  if (!(t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_max must be positive");
  if (!zeros.certified() || zeros.t_lo() > 14.0 || zeros.t_hi() < t_max + kRecommendedMargin)
    throw Error(ErrorCode::UncertifiedZeros, "RHS needs a certified table from below the first zero to t_max + 50");
  auto steps = normalized_ladder(std::move(ladder), t_max);
  const int main = opt.kernel == KernelKind::Exact ? 0 : 1;
  SideResult r;
  CompensatedSum acc, other;
  double lo = 0.0;
  for (double t : steps) {
    if (t > lo) {
      auto seg = plancherel_rhs_segment(p, zeros, lo, t, opt);
      acc.add(seg[main].value);
      other.add(seg[1 - main].value);
      r.abs_err_est += seg[main].abs_err_est;
      r.n_evals += seg[main].n_evals;
      lo = t;
    }
    r.ladder.emplace_back(t, acc.value());
    r.other_ladder.emplace_back(t, other.value());
  }
  r.value = acc.value();
  r.other_kernel = other.value();
  r.tail_bound = rhs_tail_bound(p, t_max, opt.kernel, opt.safety);
  return r;
}

PlancherelReport plancherel_check(const ArithParams& p, const SieveTable& sieve, const ZeroTable& zeros,
                                  double X_max, double t_max, const CheckOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  const double need = X_max * (1.0 + 1.0 / p.T);
  if (need + 1.0 >= double(sieve.limit()))
    throw Error(ErrorCode::SieveTooSmall, "X_max (1 + 1/T) beyond the sieve");
  PlancherelReport rep;
  rep.T = p.T;
  rep.a = p.a;
  rep.alpha = p.alpha;
  rep.k = p.k;
  rep.X_max = X_max;
  rep.t_max = t_max;
  rep.kernel = kernel_name(opt.rhs.kernel);

  FAlphaTable f(sieve, p.alpha, static_cast<std::uint64_t>(need) + 2);
  auto L = plancherel_lhs(p, f, X_max, opt.lhs_tol, {0.25 * X_max, 0.5 * X_max});
  auto R = plancherel_rhs(p, zeros, t_max, opt.rhs, {0.25 * t_max, 0.5 * t_max});
  rep.lhs = L.value;
  rep.rhs = R.value;
  rep.rhs_other_kernel = R.other_kernel;
  rep.lhs_tail_bound = L.tail_bound;
  rep.rhs_tail_bound = R.tail_bound;
  rep.lhs_ladder = L.ladder;
  rep.rhs_ladder = R.ladder;
  for (std::size_t i = 0; i < L.ladder.size() && i < R.ladder.size(); ++i) {
    double l = L.ladder[i].second, r = R.ladder[i].second;
    rep.joint_gaps.push_back(std::fabs(l - r) / std::max(l, r));
  }
  const double big = std::max(rep.lhs, rep.rhs);
  rep.rel_gap = std::fabs(rep.lhs - rep.rhs) / big;
  rep.allowed_gap = std::max(opt.gap_floor, (rep.lhs_tail_bound + rep.rhs_tail_bound) / big);
  rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (opt.throw_on_gap && !rep.ok()) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "lhs %.9g rhs %.9g rel_gap %.4g allowed %.4g (tails %.3g, %.3g)", rep.lhs,
                  rep.rhs, rep.rel_gap, rep.allowed_gap, rep.lhs_tail_bound, rep.rhs_tail_bound);
    throw Error(ErrorCode::GapExceeded, buf);
  }
  return rep;
}

}  // namespace zwm
