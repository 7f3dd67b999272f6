#include <doctest.h>

#include <cmath>

#include "zwm/arithmetic.hpp"
#include "zwm/plancherel.hpp"
#include "zwm/zeros.hpp"

using namespace zwm;

namespace {
const SieveTable& sieve() {
  static SieveTable s(60'000);
  return s;
}
}  // namespace

TEST_CASE("alpha = 0 reduces to the variance integrand") {
  auto p = ArithParams::from_alpha(0.0, 200.0);
  FAlphaTable f(sieve(), 0.0);
  auto l = plancherel_lhs(p, f, 5e4, 1e-11);
  PiecewiseOptions o;
  o.tol = 1e-11;
  auto j = integrate_discrepancy(p, f, 1.0, 5e4, o);
  CHECK(std::fabs(l.value - j.value) <= 1e-10);
}

TEST_CASE("lhs is monotone in X and partition invariant") {
  auto p = ArithParams::make(1.0, 200.0);
  FAlphaTable f(sieve(), p.alpha);
  auto l = plancherel_lhs(p, f, 5e4, 1e-11, {1e3, 1e4, 2.5e4});
  for (std::size_t i = 1; i < l.ladder.size(); ++i) CHECK(l.ladder[i].second >= l.ladder[i - 1].second);
  CHECK(l.tail_bound > 0.0);
  PiecewiseOptions o;
  o.tol = 1e-11;
  o.weight_exponent = 2.0 + 2.0 * p.alpha;
  auto a = integrate_discrepancy(p, f, 1.0, 5e4, o);
  o.refine = 1;
  auto b = integrate_discrepancy(p, f, 1.0, 5e4, o);
  CHECK(std::fabs(a.value - b.value) <= 1e-10);
}

TEST_CASE("rhs integrand and kernels") {
  auto p = ArithParams::make(1.0, 200.0);
  double k = p.k;
  CHECK(plancherel_kernel(p, 1e-9, KernelKind::Sine) == doctest::Approx(k * k / M_PI).epsilon(1e-8));
  CHECK(std::isfinite(plancherel_kernel(p, 0.0, KernelKind::Exact)));
  auto v = plancherel_integrand(p, 1e-6);
  CHECK(std::isfinite(v[0]));
  CHECK(std::isfinite(v[1]));
  for (double t = 0.37; t < 600.0; t += 7.3) {
    auto w = plancherel_integrand(p, t);
    CHECK(w[0] >= 0.0);
    CHECK(w[1] >= 0.0);
  }
}

TEST_CASE("dyadic block respects the tail bound") {
  auto p = ArithParams::make(1.0, 200.0);
  auto z = find_zeros(10.0, 1300.0);
  for (auto kind : {KernelKind::Exact, KernelKind::Sine}) {
    RhsOptions o;
    o.tol = 1e-6;
    auto block = plancherel_rhs_segment(p, z, 600.0, 1200.0, o);
    int i = kind == KernelKind::Exact ? 0 : 1;
    CHECK(block[i].value <= rhs_block_bound(p, 600.0, kind, 3.0));
  }
  CHECK(rhs_tail_bound(p, 600.0, KernelKind::Sine) > rhs_block_bound(p, 600.0, KernelKind::Sine));
}

TEST_CASE("rhs ladder is cumulative") {
  auto p = ArithParams::make(1.0, 200.0);
  auto z = find_zeros(10.0, 700.0);
  RhsOptions o;
  o.tol = 1e-6;
  auto r = plancherel_rhs(p, z, 600.0, o, {150.0, 300.0});
  REQUIRE(r.ladder.size() == 3);
  CHECK(r.ladder.back().second == r.value);
  CHECK(r.ladder[0].second <= r.ladder[1].second);
  CHECK(r.other_kernel > 0.0);
  CHECK(std::fabs(r.other_kernel / r.value - 1.0) < 0.05);
  CHECK_THROWS_AS(plancherel_rhs(p, z, 680.0, o), Error);
}
