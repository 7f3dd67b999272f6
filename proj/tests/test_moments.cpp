#include <doctest.h>

#include <cmath>

#include "zwm/closed_forms.hpp"
#include "zwm/error.hpp"
#include "zwm/moments.hpp"
#include "zwm/zeros.hpp"

using namespace zwm;

namespace {
const ZeroTable& table() {
  static ZeroTable z = find_zeros(10.0, 2200.0);
  return z;
}
}  // namespace

TEST_CASE("shift parameters") {
  auto sp = ShiftParams::make(1.0, 1e4);
  CHECK(sp.delta == doctest::Approx(1.0 / std::log(1e4)));
  CHECK(sp.sigma == doctest::Approx(0.5 + sp.delta));
  CHECK_THROWS_AS(ShiftParams::make(-1.0, 1e4), Error);
  CHECK_THROWS_AS(ShiftParams::make(1.0, 50.0), Error);
}

TEST_CASE("sweep needs a certified table with margin") {
  auto sp = ShiftParams::make(1.0, 1000.0);
  auto s = table().in_range(900.0, 1500.0);
  auto short_table = ZeroTable::make(900.0, 1500.0, {s.begin(), s.end()}, true);
  CHECK_THROWS_AS(moment_sweep(sp, short_table), Error);
  auto all = table().ordinates();
  auto uncert = ZeroTable::make(10.0, 2200.0, all, false);
  CHECK_THROWS_AS(moment_sweep(sp, uncert), Error);
}

TEST_CASE("integrand stays finite across a zero") {
  auto sp = ShiftParams::make(1.0, 1000.0);
  LorentzKernel k(table(), sp.delta);
  double g = table().in_range(1000.0, 1010.0).front();
  for (double e : {-1e-3, -1e-7, 0.0, 1e-7, 1e-3}) {
    auto v = moment_integrand(sp, g + e, &k);
    for (double x : v) CHECK(std::isfinite(x));
    CHECK(v[kWeighted] >= 0.0);
    CHECK(v[kWeighted] < 1e3);
  }
}

TEST_CASE("pointwise real/imaginary split") {
  auto sp = ShiftParams::make(0.5, 1000.0);
  auto ts = seeded_heights(50, 1000.0, 2000.0, 0);
  CHECK(pointwise_split_residual(sp, ts) < 1e-10);
}

TEST_CASE("weighted moment at T = 1000") {
  auto sp = ShiftParams::make(1.0, 1000.0);
  MomentOptions o;
  o.tol = 1e-5;
  auto s = moment_sweep(sp, table(), o);
  auto w = weighted_moment(s);
  CHECK(w.p == 3);
  CHECK(w.normalized >= eval_formula(FormulaId::F1, 1.0) - 0.1);
  CHECK(w.normalized <= eval_formula(FormulaId::F2, 1.0) + 0.1);
  CHECK(w.quad.abs_err_est <= 1e-4 * w.raw);

  auto u = unweighted_moment(s);
  CHECK(u.p == 2);
  CHECK(u.normalized > 0.0);
  auto d = s_weighted(s, SMode::Diagonal);
  auto f = s_weighted(s, SMode::Full);
  CHECK(d.normalized > 0.0);
  CHECK(f.raw >= d.raw);
  auto l = lemma22_identity_check(s);
  CHECK(std::fabs(l.i2_imag_fraction) < 0.05);
  CHECK(std::isfinite(l.residual_ratio));
}

TEST_CASE("ratio check") {
  auto ts = seeded_heights(100, 1000.0, 2000.0, 0);
  auto zero = soundararajan_ratio_check(ShiftParams::make(0.0, 1000.0), ts);
  CHECK(zero.max_ratio == 1.0);
  CHECK(zero.ok());
  auto at = std::vector<double>{table().in_range(1000.0, 1010.0).front()};
  auto r = soundararajan_ratio_check(ShiftParams::make(1.0, 1000.0), at);
  CHECK(r.max_ratio < 1e-6);
  CHECK(r.ok());
  CHECK(seeded_heights(5, 0.0, 1.0, 7) == seeded_heights(5, 0.0, 1.0, 7));
  CHECK(seeded_heights(5, 0.0, 1.0, 7) != seeded_heights(5, 0.0, 1.0, 8));
}

TEST_CASE("discrete moment at x = 0 vanishes on both sides") {
  auto r = gonek_discrete(0.0, 1000.0, table());
  CHECK(r.rhs == 0.0);
  CHECK(std::fabs(r.lhs) < 1e-10);
  CHECK(r.zeros_used > 0);
}

TEST_CASE("pair correlation") {
  auto z = find_zeros(10.0, 2000.0);
  auto d = pair_correlation(z, -1e-6, 1e-6, 2000.0);
  CHECK(d.statistic == 1.0);
  CHECK(d.prediction == doctest::Approx(1.0));
  double ref = pair_correlation_density_integral(0.5, 1.0);
  CHECK(std::fabs(ref - 0.435435838161268) < 1e-12);
}
