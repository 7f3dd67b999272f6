#include <doctest.h>

#include <cmath>

#include "zwm/error.hpp"
#include "zwm/zeta_engine.hpp"

using namespace zwm;

TEST_CASE("zeta at simple points") {
  CHECK(std::abs(zeta({2.0, 0.0}).value - cplx(M_PI * M_PI / 6.0)) < 1e-12);
  CHECK(std::abs(zeta({0.0, 0.0}).value - cplx(-0.5)) < 1e-12);
  CHECK(std::abs(zeta({0.5, 14.134725}).value) < 1e-5);
}

TEST_CASE("zeta prime and log derivative") {
  CHECK(std::abs(zeta_prime({2.0, 0.0}).value - cplx(-0.937548254315843754)) < 1e-9);
  CHECK(std::abs(zeta_prime({0.0, 0.0}).value - cplx(-0.918938533204672742)) < 1e-9);
  CHECK(std::abs(log_deriv({2.0, 0.0}).value - cplx(-0.569960993094532806)) < 1e-8);
  for (double alpha : {1e-3, 1e-4}) CHECK(std::fabs(alpha * log_deriv({1.0 + alpha, 0.0}).value.real() + 1.0) < 2 * alpha);
}

TEST_CASE("zeta prime self check agrees with the Cauchy circle") {
  for (double t : {30.0, 300.0, 3000.0}) {
    auto d = zeta_prime({0.6, t}, 1e-10, true);
    auto c = zeta_prime_cauchy({0.6, t}, 1e-10);
    CHECK(std::abs(d.value - c.value) < 1e-7 * std::max(1.0, std::abs(d.value)));
  }
}

TEST_CASE("hardy Z and theta") {
  for (double t : {50.0, 500.0, 5000.0})
    CHECK(std::fabs(std::fabs(hardy_z(t)) - std::abs(zeta({0.5, t}).value)) < 1e-10);
  CHECK(std::fabs(hardy_z(14.134725)) < 1e-4);
  CHECK(std::fabs(theta_asymptotic(100.0) - theta_loggamma(100.0)) < 1e-9);
}

TEST_CASE("chi") {
  for (double t : {20.0, 200.0}) CHECK(std::fabs(std::abs(chi({0.5, t}).value) - 1.0) < 1e-10);
  cplx p = chi({0.3, 5.0}).value * chi({0.7, -5.0}).value;
  CHECK(std::abs(p - cplx(1.0)) < 1e-10);
  ComplexPoint s{0.6, 30.0};
  cplx lhs = zeta({0.4, -30.0}).value;
  cplx rhs = chi({0.4, -30.0}).value * zeta(s).value;
  CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("Schwarz reflection") {
  for (double t : {7.0, 70.0, 700.0}) {
    CHECK(std::abs(zeta({0.3, -t}).value - std::conj(zeta({0.3, t}).value)) < 1e-12);
    CHECK(std::abs(zeta_prime({0.7, -t}).value - std::conj(zeta_prime({0.7, t}).value)) < 1e-12);
  }
}

TEST_CASE("functional equation on a seeded grid") {
  std::uint64_t x = 12345;
  auto next = [&] {
    x = x * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(x >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 100; ++i) {
    double sigma = 0.2 + 0.6 * next(), t = 10.0 + 990.0 * next();
    auto a = zeta({1.0 - sigma, -t}, 1e-10);
    auto c = chi({1.0 - sigma, -t});
    auto b = zeta({sigma, t}, 1e-10);
    double bound = a.abs_error_bound + std::abs(c.value) * b.abs_error_bound + 1e-12 * std::abs(a.value);
    CHECK(std::abs(a.value - c.value * b.value) <= 10.0 * bound + 1e-11);
  }
}

TEST_CASE("near one") {
  auto p = near_one(1e-6);
  CHECK(std::fabs(1e-6 * p.logderiv_at_1_plus_alpha + 1.0) <= 1e-5);
  CHECK(std::fabs(p.zeta_regular - 0.5772156649) <= 1e-5);
  auto q = near_one(0.25);
  CHECK(std::fabs(q.logderiv_at_1_plus_alpha - (-3.46665448124476248)) < 1e-10);
  CHECK(std::fabs(q.zeta_at_1_minus_alpha - (-3.44128538694522289)) < 1e-10);
  CHECK_THROWS_AS(near_one(0.6), Error);
}

TEST_CASE("heights beyond the supported range are rejected") {
  CHECK_THROWS_AS(zeta({0.5, 2e6}), Error);
}
