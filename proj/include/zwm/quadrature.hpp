#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "zwm/error.hpp"
#include "zwm/numeric.hpp"
#include "zwm/parallel.hpp"

namespace zwm {

struct QuadResult {
  double value = 0.0;
  double abs_err_est = 0.0;
  std::size_t n_evals = 0;
  bool max_depth_hit = false;
  std::size_t panels = 0;
};

struct QuadOptions {
  int max_depth = 40;
  double max_panel_width = std::numeric_limits<double>::infinity();
  std::size_t max_evals = 400'000'000;
  // Throw MaxDepthExceeded instead of returning a flagged result.
  bool strict = false;
};

class MaxDepthExceeded : public Error {
 public:
  explicit MaxDepthExceeded(QuadResult partial);
  const QuadResult& partial() const noexcept { return partial_; }

 private:
  QuadResult partial_;
};

template <std::size_t K>
struct VecQuadResult {
  std::array<double, K> value{};
  std::array<double, K> abs_err_est{};
  std::size_t n_evals = 0;
  bool max_depth_hit = false;
  std::size_t panels = 0;
};

using Integrand = std::function<double(double)>;

QuadResult integrate(const Integrand& f, double lo, double hi, double tol_abs,
                     std::span<const double> breakpoints = {}, const QuadOptions& opts = {});

// Dyadic blocks [lo 2^j, lo 2^{j+1}]; once the block sequence decays
// geometrically the remaining tail is extrapolated and its uncertainty is
// added to abs_err_est.
QuadResult integrate_tail(const Integrand& f, double lo, double tol_abs, double decay_exponent,
                          const QuadOptions& opts = {});

// Splits [lo, hi] at the given points and caps panel width.
std::vector<std::pair<double, double>> make_panels(double lo, double hi,
                                                   std::span<const double> breakpoints,
                                                   double max_width);

namespace detail {

inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Panel {
  double a = 0.0, b = 0.0;
  int depth = 0;
  std::array<double, K> val{};
  std::array<double, K> err{};
};

template <std::size_t K>
void check_finite(const std::array<double, K>& v, double x) {
  for (double e : v)
    if (!std::isfinite(e)) throw NonFiniteSample(x);
}

template <std::size_t K, class F>
void gk15(const F& f, Panel<K>& p) {
  const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
  std::array<double, K> k{}, g{};
  const std::array<double, K> fc = f(c);
  check_finite(fc, c);
  for (std::size_t i = 0; i < K; ++i) {
    k[i] = kWgk[7] * fc[i];
    g[i] = kWg[3] * fc[i];
  }
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const std::array<double, K> f1 = f(c - x);
    check_finite(f1, c - x);
    const std::array<double, K> f2 = f(c + x);
    check_finite(f2, c + x);
    for (std::size_t i = 0; i < K; ++i) {
      double s = f1[i] + f2[i];
      k[i] += kWgk[j] * s;
      if (j % 2 == 1) g[i] += kWg[j / 2] * s;
    }
  }
  for (std::size_t i = 0; i < K; ++i) {
    p.val[i] = k[i] * h;
    p.err[i] = std::fabs(k[i] - g[i]) * h;
  }
}

}  // namespace detail

// Adaptive GK15 over a partition. Each component i converges when its summed
// error estimate is at most max(tol_abs[i], tol_rel[i] * |value[i]|). Every
// refinement round bisects the worst panels until the rest fit in half the
// budget, and evaluates the new panels in parallel.
template <std::size_t K, class F>
VecQuadResult<K> integrate_panels(const F& f, const std::vector<std::pair<double, double>>& initial,
                                  const std::array<double, K>& tol_abs,
                                  const std::array<double, K>& tol_rel, const QuadOptions& opts = {}) {
  using detail::Panel;
  std::vector<Panel<K>> panels;
  panels.reserve(initial.size());
  for (auto [a, b] : initial) {
    if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "empty or reversed panel");
    Panel<K> p;
    p.a = a;
    p.b = b;
    panels.push_back(p);
  }
  VecQuadResult<K> out;
  parallel_for(panels.size(), [&](std::size_t i) { detail::gk15(f, panels[i]); }, 16);
  out.n_evals = 15 * panels.size();

  std::vector<std::size_t> order;
  std::vector<char> split;
  for (;;) {
    std::array<double, K> total{}, total_err{}, tol{};
    for (const auto& p : panels)
      for (std::size_t i = 0; i < K; ++i) {
        total[i] += p.val[i];
        total_err[i] += p.err[i];
      }
    bool done = true;
    for (std::size_t i = 0; i < K; ++i) {
      tol[i] = std::max(tol_abs[i], tol_rel[i] * std::fabs(total[i]));
      if (total_err[i] > tol[i]) done = false;
    }
    if (done) break;
    if (out.n_evals >= opts.max_evals) {
      out.max_depth_hit = true;
      break;
    }

    auto score = [&](const Panel<K>& p) {
      double s = 0.0;
      for (std::size_t i = 0; i < K; ++i)
        s = std::max(s, tol[i] > 0.0 ? p.err[i] / tol[i] : (p.err[i] > 0.0 ? 1e300 : 0.0));
      return s;
    };
    order.resize(panels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> scores(panels.size());
    for (std::size_t j = 0; j < panels.size(); ++j) scores[j] = score(panels[j]);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return scores[x] > scores[y] || (scores[x] == scores[y] && x < y);
    });
    split.assign(panels.size(), 0);
    std::array<double, K> remaining = total_err;
    std::size_t marked = 0;
    for (std::size_t j : order) {
      bool fits = true;
      for (std::size_t i = 0; i < K; ++i)
        if (remaining[i] > 0.5 * tol[i]) fits = false;
      if (fits) break;
      if (panels[j].depth >= opts.max_depth) continue;
      split[j] = 1;
      ++marked;
      for (std::size_t i = 0; i < K; ++i) remaining[i] -= panels[j].err[i];
    }
    if (marked == 0) {
      out.max_depth_hit = true;
      break;
    }
    std::vector<Panel<K>> next;
    next.reserve(panels.size() + marked);
    std::vector<std::size_t> fresh;
    fresh.reserve(2 * marked);
    for (std::size_t j = 0; j < panels.size(); ++j) {
      if (!split[j]) {
        next.push_back(panels[j]);
        continue;
      }
      const Panel<K>& p = panels[j];
      double m = 0.5 * (p.a + p.b);
      Panel<K> l, r;
      l.a = p.a;
      l.b = m;
      r.a = m;
      r.b = p.b;
      l.depth = r.depth = p.depth + 1;
      fresh.push_back(next.size());
      next.push_back(l);
      fresh.push_back(next.size());
      next.push_back(r);
    }
    parallel_for(fresh.size(), [&](std::size_t i) { detail::gk15(f, next[fresh[i]]); }, 16);
    out.n_evals += 15 * fresh.size();
    panels.swap(next);
  }

  std::array<CompensatedSum, K> acc{};
  for (const auto& p : panels)
    for (std::size_t i = 0; i < K; ++i) {
      acc[i].add(p.val[i]);
      out.abs_err_est[i] += p.err[i];
    }
  for (std::size_t i = 0; i < K; ++i) out.value[i] = acc[i].value();
  out.panels = panels.size();
  return out;
}

}  // namespace zwm
