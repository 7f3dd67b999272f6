#include <doctest.h>

#include <cmath>
#include <vector>

#include "zwm/error.hpp"
#include "zwm/quadrature.hpp"

using namespace zwm;

TEST_CASE("polynomial") {
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-14);
  CHECK(std::fabs(r.value - 1.0 / 3.0) < 1e-14);
  CHECK(r.n_evals >= 15);
  CHECK(r.abs_err_est >= 0.0);
}

TEST_CASE("Lorentzian squared") {
  const double a = 1.0, L = 1e4;
  double bps[] = {-a, 0.0, a};
  auto r = integrate([a](double y) { double q = a * a + y * y; return a * a / (q * q); }, -L, L, 1e-12, bps);
  CHECK(std::fabs(r.value - M_PI / 2.0) < 1e-6);
}

TEST_CASE("tails") {
  auto r = integrate_tail([](double t) { return 1.0 / (t * t); }, 1.0, 1e-12, 2.0);
  CHECK(std::fabs(r.value - 1.0) < 1e-10);
  // Integral of sin^2(t/2)/t^2 over [1, inf) = 1/2 - (cos 1 - (pi/2 - Si(1)))/2.
  auto s = integrate_tail([](double t) { double x = std::sin(0.5 * t) / t; return x * x; }, 1.0, 1e-9, 2.0);
  CHECK(std::fabs(s.value - 0.54220547527978694) < 1e-8);
  CHECK_THROWS_AS(integrate_tail([](double t) { return 1.0 / t; }, 1.0, 1e-10, 2.0), Error);
}

TEST_CASE("non-finite samples are located") {
  auto f = [](double x) { return x > 0.7 ? std::nan("") : x; };
  try {
    integrate(f, 0.0, 1.0, 1e-10);
    FAIL("expected an exception");
  } catch (const NonFiniteSample& e) {
    CHECK(e.location() > 0.7);
  }
}

TEST_CASE("max depth returns an honest partial result") {
  QuadOptions o;
  o.max_depth = 3;
  auto r = integrate([](double x) { return std::sqrt(std::fabs(x - 0.3)); }, 0.0, 1.0, 1e-15, {}, o);
  CHECK(r.max_depth_hit);
  o.strict = true;
  CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(std::fabs(x - 0.3)); }, 0.0, 1.0, 1e-15, {}, o),
                  MaxDepthExceeded);
}

TEST_CASE("refinement and partition invariance on seeded smooth integrands") {
  std::uint64_t s = 99;
  auto next = [&] {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(s >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 20; ++i) {
    double c = 0.1 + next(), w = 0.05 + next(), p = 5.0 * next();
    auto f = [=](double x) { return std::exp(-c * x) * std::cos(p * x) + w / (w * w + (x - 0.5) * (x - 0.5)); };
    auto loose = integrate(f, 0.0, 3.0, 1e-7);
    auto tight = integrate(f, 0.0, 3.0, 1e-8);
    CHECK(std::fabs(loose.value - tight.value) <= loose.abs_err_est + 1e-15);
    std::vector<double> bps{0.5 + 0.1 * next(), 1.7};
    auto split = integrate(f, 0.0, 3.0, 1e-7, bps);
    CHECK(std::fabs(split.value - tight.value) <= split.abs_err_est + tight.abs_err_est + 1e-15);
  }
}

TEST_CASE("vector quadrature over panels") {
  auto panels = make_panels(0.0, 2.0, std::vector<double>{0.5}, 0.4);
  CHECK(panels.size() >= 5);
  auto v = integrate_panels<2>([](double x) { return std::array<double, 2>{x, std::sin(x)}; }, panels, {1e-14, 1e-14},
                               {0.0, 0.0});
  CHECK(std::fabs(v.value[0] - 2.0) < 1e-13);
  CHECK(std::fabs(v.value[1] - (1.0 - std::cos(2.0))) < 1e-13);
}
