#include "zwm/quadrature.hpp"

#include <cstdio>
#include <string>

namespace zwm {

namespace {

std::string describe(const QuadResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "value %.12g, abs_err_est %.3g after %zu evaluations", r.value,
                r.abs_err_est, r.n_evals);
  return buf;
}

QuadResult scalar(const VecQuadResult<1>& v) {
  QuadResult r;
  r.value = v.value[0];
  r.abs_err_est = v.abs_err_est[0];
  r.n_evals = v.n_evals;
  r.max_depth_hit = v.max_depth_hit;
  r.panels = v.panels;
  return r;
}

}  // namespace

MaxDepthExceeded::MaxDepthExceeded(QuadResult partial)
    : Error(ErrorCode::MaxDepthExceeded, describe(partial)), partial_(partial) {}

std::vector<std::pair<double, double>> make_panels(double lo, double hi,
                                                   std::span<const double> breakpoints,
                                                   double max_width) {
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "integration range needs lo < hi");
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (!(b > cuts.back())) {
      if (b < cuts.back() && b > lo) throw Error(ErrorCode::InvalidArgument, "breakpoints must be sorted");
      continue;
    }
    if (b >= hi) break;
    cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::vector<std::pair<double, double>> panels;
  panels.reserve(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    std::size_t pieces = 1;
    if (std::isfinite(max_width) && max_width > 0.0)
      pieces = static_cast<std::size_t>(std::ceil((b - a) / max_width));
    if (pieces < 1) pieces = 1;
    for (std::size_t j = 0; j < pieces; ++j) {
      double x0 = a + (b - a) * double(j) / double(pieces);
      double x1 = (j + 1 == pieces) ? b : a + (b - a) * double(j + 1) / double(pieces);
      panels.emplace_back(x0, x1);
    }
  }
  return panels;
}

QuadResult integrate(const Integrand& f, double lo, double hi, double tol_abs,
                     std::span<const double> breakpoints, const QuadOptions& opts) {
  if (!(tol_abs > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_abs must be positive");
  auto panels = make_panels(lo, hi, breakpoints, opts.max_panel_width);
  auto g = [&f](double x) { return std::array<double, 1>{f(x)}; };
  QuadResult r = scalar(integrate_panels<1>(g, panels, {tol_abs}, {0.0}, opts));
  if (r.max_depth_hit && opts.strict) throw MaxDepthExceeded(r);
  return r;
}

QuadResult integrate_tail(const Integrand& f, double lo, double tol_abs, double decay_exponent,
                          const QuadOptions& opts) {
  if (!(lo > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail integration needs lo > 0");
  if (!(decay_exponent >= 2.0)) throw Error(ErrorCode::InvalidArgument, "decay exponent must be >= 2");
  if (!(tol_abs > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_abs must be positive");
  const double r = std::pow(2.0, 1.0 - decay_exponent);
  const double slow = std::sqrt(r);
  const double geo = r / (1.0 - r);

  QuadResult out;
  CompensatedSum sum;
  double prev = 0.0, prev2 = 0.0;
  int slow_run = 0;
  for (int j = 0; j < 200; ++j) {
    double a = std::ldexp(lo, j), b = 2.0 * a;
    QuadResult blk = integrate(f, a, b, tol_abs * std::ldexp(0.125, -j), {}, opts);
    sum.add(blk.value);
    out.abs_err_est += blk.abs_err_est;
    out.n_evals += blk.n_evals;
    out.panels += blk.panels;
    out.max_depth_hit = out.max_depth_hit || blk.max_depth_hit;
    double cur = blk.value;
    if (j >= 1) {
      if (std::fabs(cur) > slow * std::fabs(prev) && std::fabs(cur) > 0.25 * tol_abs)
        ++slow_run;
      else
        slow_run = 0;
      if (slow_run >= 3)
        throw Error(ErrorCode::SlowDecayDetected,
                    "dyadic blocks stopped shrinking near t = " + std::to_string(b));
    }
    if (j >= 2) {
      // Tail extrapolated from the current block with the declared decay;
      // uncertainty from the departure of the last blocks from that law.
      double tail = cur * geo;
      double dev = std::max(std::fabs(cur - r * prev), std::fabs(prev - r * prev2));
      double unc = 2.0 * dev * geo;
      if (unc < 0.25 * tol_abs) {
        sum.add(tail);
        out.abs_err_est += unc;
        break;
      }
    }
    prev2 = prev;
    prev = cur;
  }
  out.value = sum.value();
  if (out.max_depth_hit && opts.strict) throw MaxDepthExceeded(out);
  return out;
}

}  // namespace zwm
