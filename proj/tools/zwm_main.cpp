#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "zwm/acceptance.hpp"
#include "zwm/arithmetic.hpp"
#include "zwm/closed_forms.hpp"
#include "zwm/error.hpp"
#include "zwm/moments.hpp"
#include "zwm/parallel.hpp"
#include "zwm/plancherel.hpp"
#include "zwm/zeros.hpp"
#include "zwm/zeta_engine.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAssert = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  double a = 1.0;
  double T = 1000.0;
  double b = 1.0;
  double tol = 0.0;  // 0: the operation's default
  double sigma = 0.5;
  double t = 100.0;
  double x = 0.0;
  double x_log_T = -1.0;
  std::string range;
  std::string window = "0:0.5";
  std::string a_grid = "0.1:4:0.1";
  std::string zeros_file;
  std::string cache_dir;
  std::string output;
  std::string tier = "fast";
  std::string kernel = "exact";
  std::string what = "zeta";
  std::string perturb;
  std::vector<int> only;
  double X_max = 1e6;
  double t_max = 2e4;
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool timing = false;
  bool no_cache = false;
  bool unfolded = false;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::pair<double, double> parse_pair(const std::string& s, const char* flag) {
  auto c = s.find(':');
  if (c == std::string::npos) throw UsageError(std::string(flag) + " expects lo:hi, got '" + s + "'");
  try {
    return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects lo:hi, got '" + s + "'");
  }
}

std::vector<double> parse_grid(const std::string& s) {
  auto c1 = s.find(':');
  auto c2 = c1 == std::string::npos ? c1 : s.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("--a-grid expects lo:hi:step, got '" + s + "'");
  double lo, hi, step;
  try {
    lo = std::stod(s.substr(0, c1));
    hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(s.substr(c2 + 1));
  } catch (const std::exception&) {
    throw UsageError("--a-grid expects lo:hi:step, got '" + s + "'");
  }
  if (!(step > 0.0) || hi < lo) throw UsageError("--a-grid needs lo <= hi and step > 0");
  std::size_t n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g;
  for (std::size_t i = 0; i < n; ++i) g.push_back(lo + double(i) * step);
  return g;
}

bool slow(const Config& c) { return c.tier == "slow"; }

void require_tier(const Config& c, double T, double b = 1.0) {
  if (slow(c)) return;
  if (T > 3e4) throw UsageError("--T " + num(T) + " needs --tier slow (fast tier allows T <= 3e4)");
  if (std::pow(T, b) > 1e7) throw UsageError("--T^--b = " + num(std::pow(T, b)) + " needs --tier slow");
}

void write_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw zwm::Error(zwm::ErrorCode::Io, "cannot write " + tmp.string());
    f << text;
    if (!f.flush()) throw zwm::Error(zwm::ErrorCode::Io, "write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path);
}

void emit(const Config& c, const std::string& text) {
  if (c.output.empty() || c.output == "-")
    std::fwrite(text.data(), 1, text.size(), stdout);
  else
    write_atomic(c.output, text);
}

void emit(const Config& c, const json& j) { emit(c, j.dump(2) + "\n"); }

fs::path cache_dir(const Config& c) {
  if (!c.cache_dir.empty()) return c.cache_dir;
  if (const char* env = std::getenv("ZWM_CACHE_DIR"); env && *env) return env;
  return ".zwm-cache";
}

std::string zero_table_text(const zwm::ZeroTable& z) {
  std::string s;
  char buf[96];
  std::snprintf(buf, sizeof buf, "# zwm-zeros v1 %.17g %.17g %zu %d\n", z.t_lo(), z.t_hi(), z.count(),
                int(z.certified()));
  s += buf;
  for (double g : z.ordinates()) {
    std::snprintf(buf, sizeof buf, "%.9f\n", g);
    s += buf;
  }
  return s;
}

bool current_version(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  return std::getline(f, line) && line.rfind("# zwm-zeros v1 ", 0) == 0;
}

zwm::ZeroTable zeros_for(const Config& c, double lo, double hi, double tol = 1e-9) {
  if (!c.zeros_file.empty()) {
    auto z = zwm::load_zeros(c.zeros_file);
    if (!z.covers(lo, hi))
      throw UsageError("--zeros-file covers [" + num(z.t_lo()) + ", " + num(z.t_hi()) + "], need [" + num(lo) +
                       ", " + num(hi) + "]");
    auto s = z.in_range(lo, hi);
    return zwm::ZeroTable::make(lo, hi, {s.begin(), s.end()}, z.certified());
  }
  if (c.no_cache) return zwm::find_zeros(lo, hi, tol);
  fs::path p = cache_dir(c) / ("zeros_" + num(lo) + "_" + num(hi) + "_" + num(tol) + ".txt");
  if (fs::exists(p) && current_version(p)) return zwm::load_zeros(p);
  auto z = zwm::find_zeros(lo, hi, tol);
  fs::create_directories(p.parent_path());
  zwm::save_zeros(z, p);
  return z;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json moment_json(const zwm::MomentReport& r, const Config& c) {
  return json{{"kind", r.kind},
              {"a", r.a},
              {"T", r.T},
              {"raw", r.raw},
              {"p", r.p},
              {"normalized", r.normalized},
              {"prediction", r.prediction},
              {"lower", r.lower},
              {"upper", r.upper},
              {"abs_err_est", r.quad.abs_err_est},
              {"n_evals", r.quad.n_evals},
              {"runtime_s", c.timing ? r.runtime_s : 0.0}};
}

zwm::MomentSweep sweep_for(const Config& c) {
  require_tier(c, c.T);
  auto sp = zwm::ShiftParams::make(c.a, c.T);
  auto z = zeros_for(c, std::max(10.0, c.T - 100.0), 2.0 * c.T + 100.0);
  zwm::MomentOptions mo;
  if (c.tol > 0.0) mo.tol = c.tol;
  return zwm::moment_sweep(sp, z, mo);
}

// --- subcommand bodies -------------------------------------------------------

int zeros_find(const Config& c) {
  if (c.range.empty()) throw UsageError("--range lo:hi is required");
  auto [lo, hi] = parse_pair(c.range, "--range");
  emit(c, zero_table_text(zeros_for(c, lo, hi, c.tol > 0.0 ? c.tol : 1e-9)));
  return kExitOk;
}

int zeros_load(const Config& c) {
  if (c.zeros_file.empty()) throw UsageError("--zeros-file is required");
  auto z = zwm::load_zeros(c.zeros_file);
  json j{{"t_lo", z.t_lo()}, {"t_hi", z.t_hi()}, {"count", z.count()}, {"certified", z.certified()}};
  if (z.count()) {
    j["first"] = z.ordinates().front();
    j["last"] = z.ordinates().back();
  }
  emit(c, j);
  return kExitOk;
}

int zeros_verify(const Config& c) {
  if (c.zeros_file.empty()) throw UsageError("--zeros-file is required");
  auto z = zwm::load_zeros(c.zeros_file);
  const double tol = c.tol > 0.0 ? c.tol : 1e-9;
  auto ref = zwm::find_zeros(std::max(10.0, z.t_lo()), z.t_hi(), tol);
  double worst = 0.0;
  bool same = ref.count() == z.count();
  if (same)
    for (std::size_t i = 0; i < z.count(); ++i)
      worst = std::max(worst, std::fabs(ref.ordinates()[i] - z.ordinates()[i]));
  bool ok = same && ref.certified() && worst <= 1e-6;
  emit(c, json{{"t_lo", z.t_lo()},
               {"t_hi", z.t_hi()},
               {"file_count", z.count()},
               {"computed_count", ref.count()},
               {"certified", ref.certified()},
               {"max_abs_diff", same ? json(worst) : json(nullptr)},
               {"ok", ok}});
  return ok ? kExitOk : kExitAssert;
}

int eval_cmd(const Config& c) {
  zwm::ComplexPoint s{c.sigma, c.t};
  json j{{"what", c.what}, {"sigma", c.sigma}, {"t", c.t}};
  auto put = [&](const zwm::EvalResult& r) {
    j["re"] = r.value.real();
    j["im"] = r.value.imag();
    j["abs_error_bound"] = r.abs_error_bound;
  };
  if (c.what == "zeta")
    put(zwm::zeta(s));
  else if (c.what == "zetaprime")
    put(zwm::zeta_prime(s, 1e-12, true));
  else if (c.what == "logderiv")
    put(zwm::log_deriv(s));
  else if (c.what == "chi")
    put(zwm::chi(s));
  else if (c.what == "hardy_z")
    j["value"] = zwm::hardy_z(c.t);
  else if (c.what == "theta")
    j["value"] = zwm::theta(c.t);
  else
    throw UsageError("--what must be zeta, zetaprime, logderiv, chi, hardy_z or theta");
  emit(c, j);
  return kExitOk;
}

zwm::FormulaEvaluator evaluator(const Config& c) {
  if (c.perturb.empty()) return zwm::eval_formula;
  auto eq = c.perturb.find('=');
  if (eq == std::string::npos) throw UsageError("--perturb expects NAME=factor");
  zwm::FormulaId id;
  double factor;
  try {
    id = zwm::parse_formula(c.perturb.substr(0, eq));
    factor = std::stod(c.perturb.substr(eq + 1));
  } catch (const std::exception& e) {
    throw UsageError(std::string("--perturb: ") + e.what());
  }
  return [id, factor](zwm::FormulaId f, double a) {
    double v = zwm::eval_formula(f, a);
    return f == id ? v * factor : v;
  };
}

int formula_table(const Config& c) {
  auto grid = parse_grid(c.a_grid);
  auto ev = evaluator(c);
  std::string out = "a";
  for (auto id : zwm::kAllFormulas) out += "," + std::string(zwm::formula_name(id));
  out += "\n";
  for (double a : grid) {
    out += num(a);
    for (auto id : zwm::kAllFormulas) out += "," + num(ev(id, a));
    out += "\n";
  }
  emit(c, out);
  return kExitOk;
}

int formula_identities(const Config& c) {
  auto grid = parse_grid(c.a_grid);
  auto rep = zwm::identity_suite(grid, evaluator(c), false);
  json rows = json::array();
  for (auto& r : rep.rows)
    rows.push_back({{"a", r.a},
                    {"lemma_split_rel", r.lemma_split_rel},
                    {"ingham_rel", r.ingham_rel},
                    {"f1_below_pred", r.f1_below_pred},
                    {"pred_below_f2", r.pred_below_f2}});
  emit(c, json{{"ok", rep.ok()},
               {"max_lemma_split_rel", rep.max_lemma_split_rel},
               {"max_ingham_rel", rep.max_ingham_rel},
               {"max_branch_gap", rep.max_branch_gap},
               {"violations", rep.violations},
               {"notes", rep.notes},
               {"rows", rows}});
  return rep.ok() ? kExitOk : kExitAssert;
}

int moment_basic(const Config& c, const std::string& kind) {
  if (kind == "zetaprime") {
    require_tier(c, c.T);
    auto r = zwm::zetaprime_moment(zwm::ShiftParams::make(c.a, c.T), c.tol > 0.0 ? c.tol : 1e-6);
    emit(c, moment_json(r, c));
    return kExitOk;
  }
  auto s = sweep_for(c);
  zwm::MomentReport r;
  if (kind == "weighted")
    r = zwm::weighted_moment(s);
  else if (kind == "unweighted")
    r = zwm::unweighted_moment(s);
  else
    r = zwm::s_weighted(s, zwm::SMode::Diagonal);
  emit(c, moment_json(r, c));
  return kExitOk;
}

int moment_identity(const Config& c) {
  auto s = sweep_for(c);
  auto r = zwm::lemma22_identity_check(s);
  emit(c, json{{"a", c.a},
               {"T", c.T},
               {"lhs", r.lhs},
               {"rhs", r.rhs},
               {"residual_ratio", r.residual_ratio},
               {"i1_ratio", r.i1_ratio},
               {"i2_ratio", r.i2_ratio},
               {"i2_imag_fraction", r.i2_imag_fraction},
               {"full_over_diag", r.full_over_diag},
               {"near_truncation_over_T", r.near_truncation_over_T},
               {"runtime_s", c.timing ? s.runtime_s : 0.0}});
  return kExitOk;
}

int moment_gonek(const Config& c) {
  require_tier(c, c.T);
  double x = c.x_log_T >= 0.0 ? c.x_log_T / std::log(c.T) : c.x;
  auto z = zeros_for(c, std::max(10.0, c.T - 100.0), 2.0 * c.T + 100.0);
  auto r = zwm::gonek_discrete(x, c.T, z);
  emit(c, json{{"x", r.x},
               {"T", r.T},
               {"zeros_used", r.zeros_used},
               {"lhs", r.lhs},
               {"rhs", r.rhs},
               {"ratio", r.ratio},
               {"rhs_local", r.rhs_local}});
  return kExitOk;
}

int moment_paircorr(const Config& c) {
  require_tier(c, c.T);
  auto [lo, hi] = parse_pair(c.window, "--window");
  auto z = zeros_for(c, 10.0, c.T);
  auto r = zwm::pair_correlation(z, lo, hi, c.T, c.unfolded);
  emit(c, json{{"a_lo", r.a_lo},
               {"a_hi", r.a_hi},
               {"T", r.T},
               {"unfolded", c.unfolded},
               {"n_zeros", r.n_zeros},
               {"pairs", r.pairs},
               {"statistic", r.statistic},
               {"prediction", r.prediction}});
  return kExitOk;
}

int moment_ratio(const Config& c) {
  require_tier(c, c.T);
  double lo = c.T, hi = 2.0 * c.T;
  if (!c.range.empty()) std::tie(lo, hi) = parse_pair(c.range, "--range");
  auto ts = zwm::seeded_heights(c.samples, lo, hi, c.seed);
  auto r = zwm::soundararajan_ratio_check(zwm::ShiftParams::make(c.a, c.T), ts);
  emit(c, json{{"a", r.a},
               {"T", r.T},
               {"c", r.c},
               {"bound", r.bound},
               {"max_ratio", r.max_ratio},
               {"argmax_t", r.argmax_t},
               {"samples", r.samples},
               {"violations", r.violations},
               {"seed", c.seed}});
  return r.ok() ? kExitOk : kExitAssert;
}

int variance_cmd(const Config& c) {
  require_tier(c, c.T, c.b);
  auto p = zwm::ArithParams::make(c.a, c.T, c.b);
  double top = std::pow(c.T, c.b) * (1.0 + 1.0 / c.T) + 16.0;
  if (top > double(zwm::kMaxSieveLimit)) throw UsageError("--T^--b beyond the sieve limit 1e8");
  zwm::SieveTable sieve(static_cast<std::uint64_t>(top));
  auto r = zwm::J_b(p, sieve, c.tol > 0.0 ? c.tol : 1e-10);
  emit(c, "T,a,b,J,normalized,breakpoints,runtime_s\n" + num(r.T) + "," + num(r.a) + "," + num(r.b) + "," +
              num(r.J) + "," + num(r.normalized) + "," + std::to_string(r.breakpoint_count) + "," +
              num(c.timing ? r.runtime_s : 0.0) + "\n");
  return kExitOk;
}

json ladder_json(const std::vector<std::pair<double, double>>& l) {
  json a = json::array();
  for (auto& [x, v] : l) a.push_back({x, v});
  return a;
}

int plancherel_cmd(const Config& c) {
  auto p = zwm::ArithParams::make(c.a, c.T, c.b);
  double top = c.X_max * (1.0 + 1.0 / c.T) + 16.0;
  if (top > double(zwm::kMaxSieveLimit)) throw UsageError("--X-max beyond the sieve limit 1e8");
  if (c.X_max > 1e7 && !slow(c)) throw UsageError("--X-max above 1e7 needs --tier slow");
  zwm::SieveTable sieve(static_cast<std::uint64_t>(top));
  auto z = zeros_for(c, 10.0, c.t_max + 100.0);
  zwm::CheckOptions co;
  co.throw_on_gap = false;
  if (c.kernel == "sine")
    co.rhs.kernel = zwm::KernelKind::Sine;
  else if (c.kernel != "exact")
    throw UsageError("--kernel must be exact or sine");
  if (c.tol > 0.0) co.rhs.tol = c.tol;
  auto r = zwm::plancherel_check(p, sieve, z, c.X_max, c.t_max, co);
  emit(c, json{{"T", r.T},
               {"a", r.a},
               {"alpha", r.alpha},
               {"k", r.k},
               {"X_max", r.X_max},
               {"t_max", r.t_max},
               {"kernel", r.kernel},
               {"lhs", r.lhs},
               {"rhs", r.rhs},
               {"rhs_other_kernel", r.rhs_other_kernel},
               {"lhs_tail_bound", r.lhs_tail_bound},
               {"rhs_tail_bound", r.rhs_tail_bound},
               {"rel_gap", r.rel_gap},
               {"allowed_gap", r.allowed_gap},
               {"joint_gaps", r.joint_gaps},
               {"lhs_ladder", ladder_json(r.lhs_ladder)},
               {"rhs_ladder", ladder_json(r.rhs_ladder)},
               {"ok", r.ok()},
               {"runtime_s", c.timing ? r.runtime_s : 0.0}});
  return r.ok() ? kExitOk : kExitAssert;
}

int report_cmd(const Config& c) {
  zwm::AcceptanceOptions opt;
  opt.tier = slow(c) ? zwm::Tier::Slow : zwm::Tier::Fast;
  opt.seed = c.seed;
  opt.only = c.only;
  opt.formulas = evaluator(c);
  opt.on_result = [](const zwm::CriterionResult& r) {
    std::fprintf(stderr, "%s\n", zwm::format_result(r).c_str());
  };
  auto t0 = std::chrono::steady_clock::now();
  auto results = zwm::run_acceptance(opt);
  json crit = json::array();
  std::vector<std::string> failed;
  for (auto& r : results) {
    json j{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"budget_s", r.budget_s}};
    if (c.timing) j["runtime_s"] = r.runtime_s;
    crit.push_back(j);
    if (!r.pass) failed.push_back(std::to_string(r.id) + " " + r.name);
  }
  json out{{"tier", c.tier}, {"seed", c.seed}, {"passed", results.size() - failed.size()},
           {"failed", failed}, {"criteria", crit}};
  if (!c.perturb.empty()) out["perturb"] = c.perturb;
  if (c.timing) out["runtime_s"] = elapsed(t0);
  emit(c, out);
  for (auto& f : failed) std::fprintf(stderr, "failed criterion: %s\n", f.c_str());
  return failed.empty() ? kExitOk : kExitAssert;
}

bool usage_code(zwm::ErrorCode e) {
  using zwm::ErrorCode;
  return e == ErrorCode::InvalidArgument || e == ErrorCode::HeightOutOfRange || e == ErrorCode::AlphaOutOfRange;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted moments of the logarithmic derivative of zeta: numerical checks"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Plain key = value file; command-line flags take precedence");

  Config c;
  app.add_option("--a", c.a, "Shift parameter a (sigma = 1/2 + a/log T)");
  app.add_option("--T", c.T, "Height T");
  app.add_option("--b", c.b, "Interval exponent b (variance range up to T^b)");
  app.add_option("--tol", c.tol, "Tolerance (0 = operation default)");
  app.add_option("--sigma", c.sigma, "Real part for eval");
  app.add_option("--t", c.t, "Imaginary part for eval");
  app.add_option("--x", c.x, "Shift x for gonek");
  app.add_option("--x-logT", c.x_log_T, "Shift for gonek given as x log T");
  app.add_option("--range", c.range, "lo:hi");
  app.add_option("--window", c.window, "Pair-correlation window lo:hi");
  app.add_option("--a-grid", c.a_grid, "lo:hi:step");
  app.add_option("--zeros-file", c.zeros_file, "Use this zero table instead of computing one");
  app.add_option("--cache-dir", c.cache_dir, "Zero-table cache (default $ZWM_CACHE_DIR or .zwm-cache)");
  app.add_flag("--no-cache", c.no_cache, "Do not read or write the zero cache");
  app.add_option("--output,-o", c.output, "Write the report here (atomically) instead of stdout");
  app.add_option("--tier", c.tier, "fast or slow")->check(CLI::IsMember({"fast", "slow"}));
  app.add_option("--kernel", c.kernel, "Plancherel kernel: exact or sine");
  app.add_option("--what", c.what, "eval target: zeta, zetaprime, logderiv, chi, hardy_z, theta");
  app.add_option("--X-max", c.X_max, "Plancherel x truncation");
  app.add_option("--t-max", c.t_max, "Plancherel t truncation");
  app.add_option("--samples", c.samples, "Sample count for ratio");
  app.add_flag("--unfolded", c.unfolded, "Pair correlation with local density scaling");
  app.add_option("--seed", c.seed, "Seed for sampled heights");
  app.add_option("--threads", c.threads, "Worker cap (0 = all cores)");
  app.add_flag("--timing", c.timing, "Report wall-clock runtimes (otherwise 0 for reproducible output)");
  app.add_option("--perturb", c.perturb, "NAME=factor: scale one closed form (harness self-test)");
  app.add_option("--only", c.only, "report: run only these criteria");

  std::function<int()> action;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<int()> f) {
    parent->add_subcommand(name, help)->fallthrough()->callback([&action, f] { action = f; });
  };
  auto group = [&](const std::string& name, const std::string& help) {
    auto* g = app.add_subcommand(name, help);
    g->fallthrough();
    g->require_subcommand(1);
    return g;
  };

  auto* zeros = group("zeros", "Zero tables");
  leaf(zeros, "find", "Compute and certify zeros in --range", [&] { return zeros_find(c); });
  leaf(zeros, "load", "Summarize --zeros-file", [&] { return zeros_load(c); });
  leaf(zeros, "verify", "Recompute the zeros of --zeros-file and compare", [&] { return zeros_verify(c); });
  app.add_subcommand("eval", "Evaluate zeta and friends at --sigma + i --t")->fallthrough()->callback([&] {
    action = [&] { return eval_cmd(c); };
  });
  auto* formula = group("formula", "Closed-form main terms");
  leaf(formula, "table", "CSV over --a-grid", [&] { return formula_table(c); });
  leaf(formula, "identities", "Identity suite over --a-grid", [&] { return formula_identities(c); });
  auto* moment = group("moment", "Moments over [T, 2T] and zero statistics");
  for (const char* k : {"weighted", "unweighted", "zetaprime", "diag"})
    leaf(moment, k, std::string(k) + " moment report", [&c, kind = std::string(k)] { return moment_basic(c, kind); });
  leaf(moment, "identity", "Split of the weighted moment into its main pieces", [&] { return moment_identity(c); });
  leaf(moment, "gonek", "Discrete moment over zeros", [&] { return moment_gonek(c); });
  leaf(moment, "paircorr", "Pair-correlation window statistic", [&] { return moment_paircorr(c); });
  leaf(moment, "ratio", "Pointwise ratio bound on sampled heights", [&] { return moment_ratio(c); });
  app.add_subcommand("variance", "Short-interval variance J_b")->fallthrough()->callback([&] {
    action = [&] { return variance_cmd(c); };
  });
  app.add_subcommand("plancherel", "Prime side against zeta side")->fallthrough()->callback([&] {
    action = [&] { return plancherel_cmd(c); };
  });
  app.add_subcommand("report", "Run the acceptance suite and emit a JSON summary")->fallthrough()->callback([&] {
    action = [&] { return report_cmd(c); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    zwm::set_max_threads(c.threads);
    if (!action) throw UsageError("no command given");
    return action();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const zwm::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", zwm::to_string(e.code()), e.what());
    return usage_code(e.code()) ? kExitUsage : kExitAssert;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitAssert;
  }
}
