#include "zwm/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>

#include "zwm/arithmetic.hpp"
#include "zwm/error.hpp"
#include "zwm/moments.hpp"
#include "zwm/numeric.hpp"
#include "zwm/plancherel.hpp"
#include "zwm/quadrature.hpp"
#include "zwm/zeros.hpp"

namespace zwm {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void append(std::string& s, const std::string& more) {
  if (!s.empty()) s += "; ";
  s += more;
}

// Shared state: one zero table for every moment-type criterion and a cache of
// sweeps so that criteria reuse each other's integrals.
class Context {
 public:
  explicit Context(const AcceptanceOptions& opt) : opt_(opt) {}

  const ZeroTable& zeros(double hi) {
    const double need = std::max(hi, 20100.0);
    if (!table_ || table_->t_hi() < need) table_ = std::make_unique<ZeroTable>(find_zeros(10.0, need));
    return *table_;
  }

  ZeroTable window(double lo, double hi) {
    const ZeroTable& z = zeros(hi);
    auto s = z.in_range(lo, hi);
    return ZeroTable::make(lo, hi, std::vector<double>(s.begin(), s.end()), z.certified());
  }

  const MomentSweep& sweep(double a, double T) {
    auto key = std::make_pair(a, T);
    auto it = sweeps_.find(key);
    if (it != sweeps_.end()) return it->second;
    ZeroTable w = window(std::max(10.0, T - 100.0), 2.0 * T + 100.0);
    MomentOptions mo;
    mo.tol = opt_.moment_tol;
    return sweeps_.emplace(key, moment_sweep(ShiftParams::make(a, T), w, mo)).first->second;
  }

  double F(FormulaId id, double a) const { return opt_.formulas(id, a); }
  const AcceptanceOptions& opt() const { return opt_; }

 private:
  const AcceptanceOptions& opt_;
  std::unique_ptr<ZeroTable> table_;
  std::map<std::pair<double, double>, MomentSweep> sweeps_;
};

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    append(detail, what);
  }
  void note(const std::string& what) { append(detail, what); }
};

Outcome algebraic_identities(Context& ctx) {
  Outcome o;
  std::vector<double> grid;
  for (int k = 1; k <= 80; ++k) grid.push_back(0.05 * k);
  auto rep = identity_suite(grid, ctx.opt().formulas, false);
  o.note(fmt("max split rel %.3g, max ingham rel %.3g", rep.max_lemma_split_rel, rep.max_ingham_rel));
  o.require(rep.ok(), rep.ok() ? fmt("%zu points", rep.rows.size())
                               : fmt("%zu violations, first: ", rep.violations.size()) + rep.violations.front());
  return o;
}

Outcome taylor_consistency(Context& ctx) {
  Outcome o;
  struct Row {
    FormulaId id;
    double c[4];
  };
  const Row rows[] = {
      {FormulaId::F_PRED, {1.0 / 3, -5.0 / 24, 3.0 / 40, -13.0 / 720}},
      {FormulaId::F1, {1.0 / 3, -5.0 / 24, 1.0 / 24, -1.0 / 144}},
      {FormulaId::F2, {1.0 / 3, -1.0 / 6, 1.0 / 15, -1.0 / 60}},
  };
  for (const Row& r : rows) {
    double worst = 0.0;
    for (double a : {1e-2, 1e-3}) {
      double poly = r.c[0] + a * (r.c[1] + a * (r.c[2] + a * r.c[3]));
      double d = std::fabs(ctx.F(r.id, a) - poly) / (10.0 * std::pow(a, 4));
      worst = std::max(worst, d);
    }
    o.require(worst <= 1.0, fmt("%s |diff|/(10a^4) %.3g", std::string(formula_name(r.id)).c_str(), worst));
  }
  return o;
}

Outcome residue_kernel(Context& ctx) {
  Outcome o;
  for (double a : {0.1, 0.5, 1.0, 2.0}) {
    auto f = [a](double y) {
      double u = 0.5 * y;
      double sinc = std::fabs(u) < 1e-4 ? 1.0 - u * u / 6.0 : std::sin(u) / u;
      double q = a * a + y * y;
      return a * a / (q * q) * (1.0 - sinc * sinc);
    };
    double bps[] = {a};
    auto head = integrate(f, 0.0, 4.0 * a + 4.0, 1e-14, bps);
    auto tail = integrate_tail(f, 4.0 * a + 4.0, 1e-14, 4.0);
    double value = 2.0 * (head.value + tail.value) / (2.0 * kPi);
    double target = ctx.F(FormulaId::DIAG_MAIN, a);
    double diff = std::fabs(value - target);
    o.require(diff <= 1e-8, fmt("a=%g quad %.12g closed %.12g diff %.2g", a, value, target, diff));
  }
  return o;
}

Outcome zero_certification(Context&) {
  Outcome o;
  struct Case {
    double hi;
    std::size_t expect;
  };
  for (Case c : {Case{100.0, 29}, Case{1000.0, 649}}) {
    ZeroTable z = find_zeros(10.0, c.hi);
    // Independent count: round(theta/pi + 1) at both ends of the window.
    double oracle = std::round(zero_count_main(c.hi)) - std::round(zero_count_main(10.0));
    o.require(z.certified() && z.count() == c.expect && double(z.count()) == oracle,
              fmt("[10,%g]: %zu zeros (expected %zu, oracle %.0f), certified %d", c.hi, z.count(), c.expect,
                  oracle, int(z.certified())));
    if (c.hi == 100.0) {
      double first = z.count() ? z.ordinates().front() : 0.0;
      o.require(std::fabs(first - 14.134725) <= 1e-5, fmt("first %.9f", first));
    }
  }
  return o;
}

Outcome explicit_formula(Context& ctx) {
  Outcome o;
  auto ts = seeded_heights(100, 1e3, 2e3, ctx.opt().seed);
  double worst = 0.0, at = 0.0;
  for (double t : ts) {
    ZeroTable w = ctx.window(std::max(10.0, t - 500.0), t + 500.0);
    double r = std::fabs(explicit_formula_residual(0.5 + 1.0 / std::log(t), t, w));
    if (r > worst) {
      worst = r;
      at = t;
    }
  }
  o.require(worst <= 0.05, fmt("max |residual| %.3g at t=%.4f over %zu heights", worst, at, ts.size()));
  return o;
}

Outcome sandwich(Context& ctx) {
  Outcome o;
  std::vector<double> Ts = {1e3, 1e4};
  if (ctx.opt().tier == Tier::Slow) Ts.push_back(1e5);
  std::map<double, double> dev;
  for (double a : {0.5, 1.0}) {
    for (double T : Ts) {
      auto r = weighted_moment(ctx.sweep(a, T));
      double lo = ctx.F(FormulaId::F1, a) - 0.1, hi = ctx.F(FormulaId::F2, a) + 0.1;
      double pred = ctx.F(FormulaId::F_PRED, a);
      o.require(lo <= r.normalized && r.normalized <= hi,
                fmt("a=%g T=%g W=%.5f in [%.5f,%.5f] pred %.5f", a, T, r.normalized, lo, hi, pred));
      if (a == 1.0) dev[T] = std::fabs(r.normalized - pred);
    }
  }
  o.require(dev[1e4] < dev[1e3], fmt("a=1 |W-pred| %.4f (1e3) -> %.4f (1e4)", dev[1e3], dev[1e4]));
  return o;
}

Outcome ingham_ggm(Context& ctx) {
  Outcome o;
  auto zp = zetaprime_moment(ctx.sweep(1.0, 1e4));
  double ing = ctx.F(FormulaId::INGHAM_MAIN, 1.0);
  double rel = std::fabs(zp.normalized / ing - 1.0);
  o.require(rel <= 0.2, fmt("zeta' moment %.5f vs %.5f (rel %.3f)", zp.normalized, ing, rel));
  auto u = unweighted_moment(ctx.sweep(0.3, 1e4));
  double band = 2.0 * 0.3 * u.normalized;
  double closed = 2.0 * 0.3 * ctx.F(FormulaId::GGM_UNWEIGHTED, 0.3);
  o.require(0.7 <= band && band <= 1.63,
            fmt("a=0.3 unweighted*2a %.4f in [0.7,1.63] (closed form*2a %.4f)", band, closed));
  return o;
}

Outcome ratio_bound(Context& ctx) {
  Outcome o;
  auto sp = ShiftParams::make(1.0, 1e4);
  auto ts = seeded_heights(200, 1e4, 2e4, ctx.opt().seed);
  auto r = soundararajan_ratio_check(sp, ts, 10.0);
  o.require(r.ok(), fmt("max ratio %.4f at t=%.3f, bound %.4f, violations %zu/%zu", r.max_ratio, r.argmax_t,
                        r.bound, r.violations, r.samples));
  return o;
}

Outcome gonek(Context& ctx) {
  Outcome o;
  const double T = 5e3;
  ZeroTable w = ctx.window(T - 100.0, 2.0 * T + 100.0);
  for (double c : {1.0, 2.0, 4.0, 8.0}) {
    auto r = gonek_discrete(c / std::log(T), T, w);
    o.require(0.7 <= r.ratio && r.ratio <= 1.3, fmt("x logT=%g ratio %.4f", c, r.ratio));
  }
  return o;
}

Outcome prime_identities(Context&) {
  Outcome o;
  SieveTable sieve(100'010);
  FAlphaTable table(sieve, 0.0);
  double worst = 0.0;
  for (double x : {10.0, 1e3, 1e5}) {
    double ref = std::lgamma(std::floor(x) + 1.0);
    double d = std::max(std::fabs(table.f(x) - ref), std::fabs(f_alpha(x, 0.0, sieve) - ref));
    worst = std::max(worst, d);
  }
  o.require(worst <= 1e-9, fmt("max |f_0 - log Gamma| %.3g", worst));
  const double alpha = 1.0 / 64.0;
  MainTerm s(alpha, MainTerm::Branch::Series), d(alpha, MainTerm::Branch::Direct);
  double gap = 0.0;
  for (double x : {2.0, 10.0, 1e3, 1e6, 1e9}) gap = std::max(gap, std::fabs(s(x) - d(x)) / std::fabs(d(x)));
  o.require(gap <= 1e-9, fmt("M_alpha branch gap at 1/64: %.3g", gap));
  return o;
}

Outcome variance_probe(Context& ctx) {
  Outcome o;
  std::vector<double> Ts = {100.0, 300.0, 1000.0};
  const double top = ctx.opt().tier == Tier::Slow ? 1e6 : Ts.back();
  SieveTable sieve(static_cast<std::uint64_t>(top * (1.0 + 1.0 / Ts.front())) + 16);
  for (double a : {0.2, 1.0}) {
    std::vector<double> vals;
    std::string row = fmt("a=%g:", a);
    for (double T : Ts) {
      vals.push_back(J_b(ArithParams::make(a, T, 1.0), sieve).normalized);
      row += fmt(" %.4f", vals.back());
    }
    if (ctx.opt().tier == Tier::Slow) {
      double v = J_b(ArithParams::make(a, 1e6, 1.0), sieve).normalized;
      row += fmt(" (T=1e6 %.4f)", v);
      o.require(v <= 5.0, fmt("a=%g T=1e6 %.4f <= 5", a, v));
    }
    bool bounded = *std::max_element(vals.begin(), vals.end()) <= 5.0;
    bool growing = true;
    for (std::size_t i = 1; i < vals.size(); ++i) growing = growing && vals[i] > vals[i - 1];
    o.require(bounded && !growing, row + (growing ? " increasing in T" : ""));
  }
  return o;
}

Outcome plancherel(Context& ctx) {
  Outcome o;
  auto p = ArithParams::make(1.0, 200.0, 1.0);
  const double X = 1e6, tmax = 2e4;
  SieveTable sieve(static_cast<std::uint64_t>(X * (1.0 + 1.0 / p.T)) + 16);
  CheckOptions co;
  co.throw_on_gap = false;
  auto r = plancherel_check(p, sieve, ctx.zeros(tmax + 100.0), X, tmax, co);
  o.require(r.rel_gap <= 0.15, fmt("lhs %.6f rhs %.6f rel_gap %.4f (tails %.3g, %.3g)", r.lhs, r.rhs, r.rel_gap,
                                   r.lhs_tail_bound, r.rhs_tail_bound));
  bool joint = true;
  std::string js = "joint gaps";
  for (std::size_t i = 0; i < r.joint_gaps.size(); ++i) {
    js += fmt(" %.4f", r.joint_gaps[i]);
    if (i && r.joint_gaps[i] >= r.joint_gaps[i - 1]) joint = false;
  }
  o.require(joint, js);
  bool tl = true;
  std::string ts = "t-ladder |lhs-rhs|";
  for (std::size_t i = 0; i < r.rhs_ladder.size(); ++i) {
    double g = std::fabs(r.lhs - r.rhs_ladder[i].second);
    ts += fmt(" %.4g", g);
    if (i && g >= std::fabs(r.lhs - r.rhs_ladder[i - 1].second)) tl = false;
  }
  o.require(tl, ts);
  std::string xs = "X-ladder |lhs_i-rhs|";
  for (auto& [x, v] : r.lhs_ladder) xs += fmt(" %.4g", std::fabs(v - r.rhs));
  o.note(xs);
  return o;
}

Outcome pair_corr(Context& ctx) {
  Outcome o;
  ZeroTable z = ctx.window(10.0, 1e4);
  for (auto [lo, hi] : {std::pair{0.0, 0.5}, std::pair{0.5, 1.0}, std::pair{1.0, 1.5}}) {
    auto r = pair_correlation(z, lo, hi, 1e4);
    auto u = pair_correlation(z, lo, hi, 1e4, true);
    double d = std::fabs(r.statistic - r.prediction);
    o.require(d <= 0.15, fmt("[%g,%g] %.4f vs %.4f (unfolded %.4f)", lo, hi, r.statistic, r.prediction,
                             u.statistic));
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_fast;
  double budget_slow;
  Outcome (*run)(Context&);
};

const Criterion kCriteria[] = {
    {1, "algebraic identities", 1, 1, algebraic_identities},
    {2, "taylor consistency", 1, 1, taylor_consistency},
    {3, "residue-kernel quadrature", 5, 5, residue_kernel},
    {4, "zero certification", 30, 30, zero_certification},
    {5, "explicit-formula residual", 120, 120, explicit_formula},
    {6, "weighted-moment sandwich", 600, 3600, sandwich},
    {7, "ingham and unweighted moments", 600, 600, ingham_ggm},
    {8, "log-derivative ratio bound", 120, 120, ratio_bound},
    {9, "discrete moment over zeros", 300, 300, gonek},
    {10, "prime-side identities", 30, 30, prime_identities},
    {11, "short-interval variance probe", 600, 600, variance_probe},
    {12, "plancherel check", 1800, 1800, plancherel},
    {13, "pair correlation", 300, 300, pair_corr},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  Context ctx(opt);
  std::vector<CriterionResult> out;
  for (const Criterion& c : kCriteria) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), c.id) == opt.only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.budget_s = opt.tier == Tier::Slow ? c.budget_slow : c.budget_fast;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o.require(false, std::string("error: ") + e.what());
    }
    r.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
    r.pass = o.pass;
    r.detail = o.detail;
    if (r.runtime_s > r.budget_s) {
      r.pass = false;
      append(r.detail, fmt("over budget %.0f s", r.budget_s));
    }
    if (opt.on_result) opt.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s %2d %-30s (%.2f s / %.0f s) ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.runtime_s,
             r.budget_s) +
         r.detail;
}

}  // namespace zwm
