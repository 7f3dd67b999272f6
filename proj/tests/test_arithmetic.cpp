#include <doctest.h>

#include <cmath>

#include "zwm/arithmetic.hpp"
#include "zwm/error.hpp"
#include "zwm/zeta_engine.hpp"

using namespace zwm;

namespace {
const SieveTable& sieve() {
  static SieveTable s(200'000);
  return s;
}
}  // namespace

TEST_CASE("von Mangoldt") {
  CHECK(sieve().lambda(8) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(sieve().lambda(6) == 0.0);
  CHECK(sieve().lambda(1) == 0.0);
  CHECK(sieve().lambda(199'999) == doctest::Approx(lambda_trial(199'999)));
  double psi = sieve().psi(1e4);
  double band = 3.0 * 100.0 * std::pow(std::log(1e4), 2);
  CHECK(std::fabs(psi - 1e4) <= band);
  CHECK(std::fabs(psi - 10013.39669326311) < 1e-8);
  CHECK(sieve().spot_check(1000, 0) == 0);
  CHECK_THROWS_AS(SieveTable(kMaxSieveLimit + 1), Error);
}

TEST_CASE("divisor power sums") {
  DivisorPowerSum d0(0.0), d1(1.0), d(0.1);
  CHECK(d0(7.9) == 7.0);
  CHECK(d1(4.0) == 10.0);
  const double a = 0.1, N = 1000.0;
  const double zeta_minus = -0.4172280407673668568;
  double em = zeta_minus + std::pow(N, 1 + a) / (1 + a) + std::pow(N, a) / 2 + a * std::pow(N, a - 1) / 12;
  double remainder = std::fabs(a * (a - 1) * (a - 2)) / 720.0 * std::pow(N, a - 3) * 2.0;
  CHECK(std::fabs(d(N) - em) <= remainder + 1e-11);
}

TEST_CASE("f_alpha") {
  FAlphaTable t0(sieve(), 0.0);
  for (double x : {10.0, 1e3, 1e5}) {
    double ref = std::lgamma(std::floor(x) + 1.0);
    CHECK(std::fabs(t0.f(x) - ref) <= 1e-9);
    CHECK(std::fabs(f_alpha(x, 0.0, sieve()) - ref) <= 1e-9);
  }
  CHECK(f_alpha(1.9, 0.3, sieve()) == 0.0);
  FAlphaTable t(sieve(), 0.2);
  CHECK(t.f(1.5) == 0.0);
  double prev = 0.0;
  for (double x = 1.0; x < 300.0; x += 0.25) {
    CHECK(t.f(x) >= prev);
    if (std::floor(x) == std::floor(x - 0.25)) CHECK(t.f(x) == prev);
    prev = t.f(x);
  }
  CHECK(t.f(777.7) == doctest::Approx(f_alpha(777.7, 0.2, sieve())).epsilon(1e-13));
}

TEST_CASE("main term") {
  // Limit alpha -> 0 is x log x - x, i.e. the constant c is 0.
  const double x = 1e3;
  double m0 = x * std::log(x) - x;
  double e3 = M_alpha(x, 1e-3) - m0, e4 = M_alpha(x, 1e-4) - m0;
  double c = (10.0 * e4 - e3) / 9.0 / x;
  // What is left after eliminating the linear term is about alpha_3 alpha_4 log^3(x) / 6.
  CHECK(std::fabs(c) < 1e-5);
  CHECK(std::fabs(e4) < std::fabs(e3));
  CHECK(M_alpha(x, 0.0) == doctest::Approx(m0).epsilon(1e-14));

  const double alpha = 0.2;
  auto p = near_one(alpha);
  double lead = -p.logderiv_at_1_plus_alpha / (1 + alpha);
  for (double y : {1e8, 1e11}) {
    double ratio = M_alpha(y, alpha) / std::pow(y, 1 + alpha);
    CHECK(ratio == doctest::Approx(lead + p.zeta_at_1_minus_alpha * std::pow(y, -alpha)).epsilon(1e-12));
  }
  // The secondary term zeta(1 - alpha) x^{-alpha} is still 3% at 1e8; 1% needs x near 1e11.
  CHECK(M_alpha(1e11, alpha) / std::pow(1e11, 1 + alpha) == doctest::Approx(lead).epsilon(1e-2));

  for (double a : {1.0 / 64 - 1e-5, 1.0 / 64, 1.0 / 64 + 1e-5}) {
    MainTerm s(a, MainTerm::Branch::Series), d(a, MainTerm::Branch::Direct);
    for (double y : {2.0, 50.0, 1e4, 1e7}) CHECK(std::fabs(s(y) - d(y)) <= 1e-9 * std::fabs(d(y)));
  }
  MainTerm m(0.05);
  for (double y : {10.0, 1e3, 1e6})
    CHECK(m.increment(y, 0.01) == doctest::Approx(m(y * 1.01) - m(y)).epsilon(1e-10));
}

TEST_CASE("discrepancy") {
  auto p = ArithParams::make(0.0, 100.0);
  MainTerm m(0.0);
  FAlphaTable f(sieve(), 0.0);
  double d = discrepancy(99.5, p, sieve());
  CHECK(d + m.increment(99.5, 1.0 / 100.0) == doctest::Approx(std::log(100.0)).epsilon(1e-12));
  CHECK(discrepancy(99.5, p, f, m) == doctest::Approx(d).epsilon(1e-12));

  auto q = ArithParams::make(1.0, 100.0);
  MainTerm mq(q.alpha);
  double x = 1000.2;  // (1000.2, 1010.202] contains integers; pick a quiet one
  x = 10.1;           // (10.1, 10.201]
  double dq = discrepancy(x, q, sieve());
  CHECK(dq == doctest::Approx(-mq.increment(x, 1.0 / q.T)).epsilon(1e-12));
  auto nr = near_one(q.alpha);
  double bound = 2.0 * std::pow(x, q.alpha) * (x / q.T) *
                 (std::fabs(nr.logderiv_at_1_plus_alpha) + std::fabs(nr.zeta_at_1_minus_alpha)) * 2.0;
  CHECK(std::fabs(dq) <= bound);

  SieveTable bigger(300'000);
  for (double y : {99.5, 12345.6, 150000.3}) CHECK(discrepancy(y, q, bigger) == discrepancy(y, q, sieve()));
}

TEST_CASE("variance integral") {
  auto p = ArithParams::make(1.0, 100.0);
  auto a = J_b(p, sieve());
  auto b = J_b(p, sieve(), 1e-10, 1);
  CHECK(a.J >= 0.0);
  CHECK(std::fabs(a.J - b.J) <= 1e-9);
  CHECK(a.normalized <= 5.0);
  CHECK(a.normalized == doctest::Approx(a.J * 100.0 / std::pow(std::log(100.0), 3)));
  // Uniformity in a: bounded ratio across a grid in (0, 1].
  double lo = 1e300, hi = 0.0;
  for (double s : {0.1, 0.25, 0.5, 1.0}) {
    double v = J_b(ArithParams::make(s, 100.0), sieve()).J;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo <= 10.0);
  SieveTable tiny(50);
  CHECK_THROWS_AS(J_b(p, tiny), Error);
}
