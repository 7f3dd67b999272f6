#include "zwm/zeros.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "zwm/error.hpp"
#include "zwm/numeric.hpp"
#include "zwm/parallel.hpp"
#include "zwm/quadrature.hpp"
#include "zwm/zeta_engine.hpp"

namespace zwm {

// ---------------------------------------------------------------------------
// ZeroTable

ZeroTable ZeroTable::make(double t_lo, double t_hi, std::vector<double> ordinates, bool certified) {
  if (!(t_lo <= t_hi)) throw Error(ErrorCode::InvalidArgument, "zero table needs t_lo <= t_hi");
  for (std::size_t i = 0; i < ordinates.size(); ++i) {
    if (!std::isfinite(ordinates[i])) throw Error(ErrorCode::InvalidArgument, "non-finite ordinate");
    if (i > 0 && !(ordinates[i] > ordinates[i - 1]))
      throw Error(ErrorCode::NonMonotonic, "ordinate " + std::to_string(i + 1) + " does not increase");
    if (ordinates[i] < t_lo || ordinates[i] > t_hi)
      throw Error(ErrorCode::InvalidArgument, "ordinate outside [t_lo, t_hi]");
  }
  ZeroTable z;
  z.t_lo_ = t_lo;
  z.t_hi_ = t_hi;
  z.ordinates_ = std::move(ordinates);
  z.certified_ = certified;
  return z;
}

std::span<const double> ZeroTable::in_range(double lo, double hi) const {
  auto b = std::lower_bound(ordinates_.begin(), ordinates_.end(), lo);
  auto e = std::upper_bound(b, ordinates_.end(), hi);
  return {ordinates_.data() + (b - ordinates_.begin()), static_cast<std::size_t>(e - b)};
}

// ---------------------------------------------------------------------------
// Counting and Gram points

double zero_count_main(double T) { return theta(T) / kPi + 1.0; }

double zero_count_coarse(double T) {
  double x = T / kTwoPi;
  return x * std::log(x) - x;
}

namespace {

double lambert_w(double x) {
  double w = std::log1p(x);
  for (int i = 0; i < 50; ++i) {
    double ew = std::exp(w);
    double f = w * ew - x;
    double step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
    w -= step;
    if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(w))) break;
  }
  return w;
}

double theta_prime(double t) { return 0.5 * std::log(t / kTwoPi) - 1.0 / (48.0 * t * t); }

}  // namespace

double gram_point(long n) {
  if (n < -1) throw Error(ErrorCode::InvalidArgument, "Gram points start at n = -1");
  double target = kPi * double(n);
  double t;
  if (n == -1) {
    t = 9.6669;
    for (int i = 0; i < 60; ++i) {
      double h = 1e-6;
      double d = (theta(t + h) - theta(t - h)) / (2.0 * h);
      double step = (theta(t) - target) / d;
      t -= step;
      if (std::fabs(step) < 1e-13 * t) break;
    }
    return t;
  }
  double x = (double(n) + 0.125) / std::exp(1.0);
  t = kTwoPi * (double(n) + 0.125) / lambert_w(x);
  for (int i = 0; i < 60; ++i) {
    double step = (theta(t) - target) / theta_prime(t);
    t -= step;
    if (std::fabs(step) < 1e-14 * t) break;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Zero search

namespace {

constexpr double kZTarget = 1e-11;

double Z(double t) { return hardy_z(t, kZTarget); }

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

struct Sample {
  double t;
  double z;
};

struct GramScan {
  long n0 = 0;                                  // index of g[0]
  std::vector<double> g;                        // Gram points
  std::vector<double> zg;                       // Z at Gram points
  std::vector<std::vector<Sample>> interior;    // samples strictly inside interval i
  std::vector<char> good;

  long index(std::size_t i) const { return n0 + static_cast<long>(i); }
  int flips(std::size_t i) const {
    int c = 0, prev = sgn(zg[i]);
    for (const auto& s : interior[i]) {
      int v = sgn(s.z);
      if (v != 0 && prev != 0 && v != prev) ++c;
      if (v != 0) prev = v;
    }
    int last = sgn(zg[i + 1]);
    if (last != 0 && prev != 0 && last != prev) ++c;
    return c;
  }
};

GramScan scan(long n_from, long n_to, double offset) {
  GramScan s;
  s.n0 = n_from;
  std::size_t n = static_cast<std::size_t>(n_to - n_from + 1);
  s.g.resize(n);
  s.zg.resize(n);
  s.good.resize(n);
  s.interior.assign(n - 1, {});
  parallel_for(n, [&](std::size_t i) {
    s.g[i] = gram_point(s.index(i));
    s.zg[i] = Z(s.g[i]);
  }, 32);
  for (std::size_t i = 0; i < n; ++i) {
    double parity = (s.index(i) % 2 == 0) ? 1.0 : -1.0;
    s.good[i] = parity * s.zg[i] > 0.0;
  }
  if (offset > 0.0 && offset < 1.0) {
    parallel_for(n - 1, [&](std::size_t i) {
      double t = s.g[i] + offset * (s.g[i + 1] - s.g[i]);
      s.interior[i].push_back({t, Z(t)});
    }, 32);
  }
  return s;
}

struct Block {
  std::size_t lo, hi;  // good Gram indices into the scan
  bool rosser = false;
};

// Refines sampling inside a Gram block until it shows at least as many sign
// changes as Gram intervals, or the subdivision budget runs out.
void resolve_block(GramScan& s, Block& b, int max_subdivisions) {
  auto count = [&] {
    int c = 0;
    for (std::size_t i = b.lo; i < b.hi; ++i) c += s.flips(i);
    return c;
  };
  const int need = static_cast<int>(b.hi - b.lo);
  if (count() >= need) {
    b.rosser = true;
    return;
  }
  for (int parts = 2; parts <= max_subdivisions; parts *= 2) {
    for (std::size_t i = b.lo; i < b.hi; ++i) {
      std::vector<Sample> pts = s.interior[i];
      double a = s.g[i], w = s.g[i + 1] - a;
      for (int k = 1; k < parts; k += 2) {
        double t = a + w * double(k) / double(parts);
        pts.push_back({t, Z(t)});
      }
      std::sort(pts.begin(), pts.end(), [](const Sample& x, const Sample& y) { return x.t < y.t; });
      s.interior[i] = std::move(pts);
    }
    if (count() >= need) {
      b.rosser = true;
      return;
    }
  }
}

double refine(double a, double b, double za, double zb, double tol) {
  // Illinois variant of regula falsi; the bracket is kept throughout and
  // steps that land too close to an end are pushed inward so the width
  // reaches tol.
  double fa = za, fb = zb;
  int side = 0;
  double last_width = b - a;
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    double c = b - fb * (b - a) / (fb - fa);
    double w = b - a;
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    double guard = std::min(0.45 * tol, 0.25 * w);
    if (c - a < guard) c = a + guard;
    if (b - c < guard) c = b - guard;
    if (it % 4 == 3) {
      if (w > 0.5 * last_width) c = 0.5 * (a + b);
      last_width = w;
    }
    double fc = Z(c);
    if (fc == 0.0) return c;
    if (sgn(fc) == sgn(fb)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  (void)za;
  return 0.5 * (a + b);
}

}  // namespace

ZeroTable find_zeros(double t_lo, double t_hi, double tol, const FindOptions& opts) {
  if (!(t_lo >= 10.0 && t_lo < t_hi && t_hi <= kMaxHeight))
    throw Error(ErrorCode::InvalidArgument, "find_zeros needs 10 <= t_lo < t_hi <= 1e6");
  if (!(tol >= 1e-10)) throw Error(ErrorCode::InvalidArgument, "tol must be >= 1e-10");

  const int K = std::max(3, static_cast<int>(std::ceil(0.0061 * std::pow(std::log(t_hi), 2) +
                                                       0.08 * std::log(t_hi))));
  long n_lo = static_cast<long>(std::floor(theta(t_lo) / kPi));
  long n_hi = static_cast<long>(std::ceil(theta(t_hi) / kPi));
  for (long pad = 16; pad <= 4096; pad *= 4) {
    long from = std::max(-1L, n_lo - pad);
    long to = n_hi + pad;
    GramScan s = scan(from, to, opts.gram_offset);

    std::vector<std::size_t> goods;
    for (std::size_t i = 0; i < s.g.size(); ++i)
      if (s.good[i]) goods.push_back(i);
    if (goods.size() < 2) continue;
    std::vector<Block> blocks;
    for (std::size_t j = 0; j + 1 < goods.size(); ++j) blocks.push_back({goods[j], goods[j + 1]});
    parallel_for(blocks.size(), [&](std::size_t j) { resolve_block(s, blocks[j], opts.max_subdivisions); });

    // Upper anchor: first good Gram point >= t_hi followed by K Rosser blocks.
    std::ptrdiff_t upper = -1;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (s.g[blocks[j].lo] < t_hi) continue;
      if (j + K > blocks.size()) break;
      bool ok = true;
      for (int q = 0; q < K; ++q) ok = ok && blocks[j + q].rosser;
      if (ok) {
        upper = static_cast<std::ptrdiff_t>(j);
        break;
      }
    }
    // Lower anchor: last good Gram point <= t_lo preceded by K Rosser blocks,
    // or g_{-1} where the count is known to be zero.
    std::ptrdiff_t lower = -1;
    bool exact_start = false;
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(blocks.size()) - 1; j >= 0; --j) {
      std::size_t gi = blocks[j].hi;
      if (s.g[gi] > t_lo) continue;
      if (j + 1 >= K) {
        bool ok = true;
        for (int q = 0; q < K; ++q) ok = ok && blocks[j - q].rosser;
        if (ok) {
          lower = j + 1;
          break;
        }
      }
    }
    if (lower < 0 && s.n0 == -1 && s.good[0] && s.g[0] <= t_lo) {
      lower = 0;
      exact_start = true;
    }
    if (upper < 0 || lower < 0) {
      if (s.n0 == -1 && upper >= 0 && lower < 0 && !(s.good[0] && s.g[0] <= t_lo)) break;
      continue;
    }
    (void)exact_start;

    std::size_t g_lo = blocks[lower].lo;
    std::size_t g_hi = blocks[upper].lo;
    long expected = s.index(g_hi) - s.index(g_lo);

    struct Bracket {
      double a, b, za, zb;
    };
    std::vector<Bracket> brackets;
    for (std::size_t i = g_lo; i < g_hi; ++i) {
      Sample prev{s.g[i], s.zg[i]};
      auto consider = [&](const Sample& cur) {
        if (sgn(cur.z) != 0 && sgn(prev.z) != 0 && sgn(cur.z) != sgn(prev.z))
          brackets.push_back({prev.t, cur.t, prev.z, cur.z});
        if (sgn(cur.z) != 0) prev = cur;
      };
      for (const auto& smp : s.interior[i]) consider(smp);
      consider({s.g[i + 1], s.zg[i + 1]});
    }
    std::vector<double> roots(brackets.size());
    parallel_for(brackets.size(), [&](std::size_t i) {
      const auto& br = brackets[i];
      roots[i] = refine(br.a, br.b, br.za, br.zb, tol);
    }, 4);

    bool certified = static_cast<long>(roots.size()) == expected;
    if (!certified)
      throw Error(ErrorCode::CertificationFailed,
                  "found " + std::to_string(roots.size()) + " sign changes between Gram points g_" +
                      std::to_string(s.index(g_lo)) + " and g_" + std::to_string(s.index(g_hi)) +
                      ", expected " + std::to_string(expected));
    std::vector<double> inside;
    for (double r : roots)
      if (r >= t_lo && r <= t_hi) inside.push_back(r);
    return ZeroTable::make(t_lo, t_hi, std::move(inside), true);
  }
  throw Error(ErrorCode::CertificationFailed,
              "no Rosser-satisfying Gram blocks found around the window ends");
}

// ---------------------------------------------------------------------------
// File format

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last && std::isfinite(out);
}

}  // namespace

ZeroTable load_zeros(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  double h_lo = 0, h_hi = 0;
  long h_count = -1;
  int h_cert = 0;
  std::vector<double> ords;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      if (t.rfind("# zwm-zeros", 0) == 0) {
        std::istringstream hs(t.substr(11));
        std::string ver;
        hs >> ver;
        if (ver != "v1") throw MalformedLine(lineno, t);
        if (!(hs >> h_lo >> h_hi >> h_count >> h_cert) || (h_cert != 0 && h_cert != 1))
          throw MalformedLine(lineno, t);
        have_header = true;
      }
      continue;
    }
    double v;
    if (!parse_double(t, v)) throw MalformedLine(lineno, t);
    if (!ords.empty() && !(v > ords.back()))
      throw Error(ErrorCode::NonMonotonic, "line " + std::to_string(lineno) + " does not increase");
    ords.push_back(v);
  }
  if (have_header) {
    if (h_count != static_cast<long>(ords.size()))
      throw Error(ErrorCode::MalformedLine, "header count " + std::to_string(h_count) + " but " +
                                                std::to_string(ords.size()) + " ordinates");
    return ZeroTable::make(h_lo, h_hi, std::move(ords), h_cert == 1);
  }
  double lo = ords.empty() ? 0.0 : ords.front();
  double hi = ords.empty() ? 0.0 : ords.back();
  return ZeroTable::make(lo, hi, std::move(ords), false);
}

void save_zeros(const ZeroTable& table, const std::filesystem::path& path) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::FILE* f = std::fopen(tmp.c_str(), "w");
    if (!f) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    std::fprintf(f, "# zwm-zeros v1 %.17g %.17g %zu %d\n", table.t_lo(), table.t_hi(), table.count(),
                 table.certified() ? 1 : 0);
    for (double g : table.ordinates()) std::fprintf(f, "%.9f\n", g);
    bool bad = std::ferror(f) != 0;
    if (std::fclose(f) != 0 || bad) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::Io, "rename to " + path.string() + " failed: " + ec.message());
  }
}

// ---------------------------------------------------------------------------
// Lorentz sums

namespace {

double density(double u) { return u > kTwoPi ? std::log(u / kTwoPi) / kTwoPi : 0.0; }

// Integral over u in [A, inf) of delta/(delta^2 + (t - sgn*u)^2) * density(u),
// mapped to s in (0, 1] by u = A/s.
double density_tail(double delta, double t, double A, double sign) {
  auto f = [=](double s) {
    if (s <= 0.0) return 0.0;
    double u = A / s;
    double d = t * s - sign * A;
    return delta * A / (delta * delta * s * s + d * d) * density(u);
  };
  return integrate(f, 0.0, 1.0, 1e-12).value;
}

double density_between(double delta, double t, double a, double b) {
  if (!(b > a)) return 0.0;
  auto f = [=](double u) { return delta / (delta * delta + (t - u) * (t - u)) * density(u); };
  std::array<double, 1> mid{t};
  std::span<const double> bp;
  if (t > a && t < b) bp = std::span<const double>(mid);
  return integrate(f, a, b, 1e-12, bp).value;
}

}  // namespace

LorentzSum lorentz_sum(double sigma, double t, const ZeroTable& table, bool tail) {
  const double delta = sigma - 0.5;
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "lorentz_sum needs sigma > 1/2");
  LorentzSum r;
  CompensatedSum acc;
  for (double g : table.ordinates()) {
    double x = t - g;
    acc.add(delta / (delta * delta + x * x));
  }
  r.window_part = acc.value();
  r.margin = std::min(t - table.t_lo(), table.t_hi() - t);
  r.margin_warning = r.margin < kRecommendedMargin;
  if (tail) {
    double below = density_between(delta, t, kTwoPi, table.t_lo());
    double above = density_tail(delta, t, table.t_hi(), 1.0);
    double mirror = density_tail(delta, t, kTwoPi, -1.0);
    r.tail_part = below + above + mirror;
    auto k = [&](double x) { return delta / (delta * delta + (t - x) * (t - x)); };
    constexpr double kMaxS = 2.5;
    r.tail_uncertainty = 2.0 * kMaxS * (k(table.t_lo()) + k(table.t_hi()));
  }
  r.value = r.window_part + r.tail_part;
  return r;
}

double explicit_formula_residual(double sigma, double t, const ZeroTable& table) {
  EvalResult ld = log_deriv({sigma, t}, 1e-9);
  return ld.value.real() + 0.5 * std::log(t / kTwoPi) - lorentz_sum(sigma, t, table, true).value;
}

LorentzKernel::LorentzKernel(const ZeroTable& table, double delta, double window)
    : table_(&table), delta_(delta), window_(window) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel needs delta > 0");
}

double LorentzKernel::operator()(double t) const {
  const double d2 = delta_ * delta_;
  double s = 0.0;
  for (double g : table_->in_range(t - window_, t + window_)) {
    double x = t - g;
    s += delta_ / (d2 + x * x);
  }
  double rho = density(t);
  s += 2.0 * rho * (0.5 * kPi - std::atan(window_ / delta_));
  s += delta_ * rho / (t + window_);
  return s;
}

double LorentzKernel::diagonal(double t, double lo, double hi, bool near_only) const {
  const double d2 = delta_ * delta_;
  double w = near_only ? 1.0 : window_;
  double s = 0.0;
  for (double g : table_->in_range(std::max(lo, t - w), std::min(hi, t + w))) {
    double x = t - g;
    double q = d2 + x * x;
    s += d2 / (q * q);
  }
  return s;
}

}  // namespace zwm
