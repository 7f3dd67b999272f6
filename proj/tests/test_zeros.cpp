#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "zwm/error.hpp"
#include "zwm/zeros.hpp"

using namespace zwm;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const char* name) {
  auto dir = fs::temp_directory_path() / "zwm_test_zeros";
  fs::create_directories(dir);
  return dir / name;
}
}  // namespace

TEST_CASE("zero counts") {
  auto a = find_zeros(10.0, 100.0);
  CHECK(a.count() == 29);
  CHECK(a.certified());
  CHECK(std::fabs(a.ordinates().front() - 14.134725) < 1e-5);
  auto b = find_zeros(10.0, 1000.0);
  CHECK(b.count() == 649);
  CHECK(b.certified());
  for (auto* z : {&a, &b})
    CHECK(double(z->count()) == std::round(zero_count_main(z->t_hi())) - std::round(zero_count_main(10.0)));
}

TEST_CASE("empty window") {
  auto z = find_zeros(50.0, 50.0 + 1e-3);
  CHECK(z.count() == 0);
  CHECK(z.certified());
}

TEST_CASE("gram offset changes the grid, not the zeros") {
  FindOptions o;
  o.gram_offset = 0.37;
  auto a = find_zeros(500.0, 700.0);
  auto b = find_zeros(500.0, 700.0, 1e-9, o);
  REQUIRE(a.count() == b.count());
  for (std::size_t i = 0; i < a.count(); ++i) CHECK(std::fabs(a.ordinates()[i] - b.ordinates()[i]) < 1e-8);
}

TEST_CASE("load, save, validation") {
  auto p = scratch("three.txt");
  {
    std::ofstream f(p);
    f << "14.134725\n21.022040\n25.010858\n";
  }
  auto z = load_zeros(p);
  CHECK(z.count() == 3);
  CHECK_FALSE(z.certified());

  auto t = find_zeros(10.0, 200.0);
  auto q = scratch("round.txt");
  save_zeros(t, q);
  auto back = load_zeros(q);
  REQUIRE(back.count() == t.count());
  CHECK(back.certified());
  for (std::size_t i = 0; i < t.count(); ++i) {
    char x[32], y[32];
    std::snprintf(x, sizeof x, "%.9f", t.ordinates()[i]);
    std::snprintf(y, sizeof y, "%.9f", back.ordinates()[i]);
    CHECK(std::string(x) == std::string(y));
  }

  auto d = scratch("desc.txt");
  {
    std::ofstream f(d);
    f << "21.022040\n14.134725\n";
  }
  CHECK_THROWS_AS(load_zeros(d), Error);
  try {
    load_zeros(d);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonMonotonic);
  }

  auto m = scratch("bad.txt");
  {
    std::ofstream f(m);
    f << "14.134725\nnot-a-number\n";
  }
  CHECK_THROWS_AS(load_zeros(m), MalformedLine);
}

TEST_CASE("counting function") {
  CHECK(zero_count_coarse(100.0) == doctest::Approx(28.13).epsilon(1e-3));
  CHECK(std::round(zero_count_main(100.0)) == 29.0);
  double prev = zero_count_main(10.0);
  for (double T = 20.0; T < 5000.0; T *= 1.3) {
    CHECK(zero_count_main(T) > prev);
    prev = zero_count_main(T);
  }
  double r3 = zero_count_main(1e3) / zero_count_coarse(1e3);
  double r5 = zero_count_main(1e5) / zero_count_coarse(1e5);
  CHECK(std::fabs(r5 - 1.0) < std::fabs(r3 - 1.0));
  CHECK(std::fabs(r5 - 1.0) < 1e-3);
}

TEST_CASE("lorentz sums") {
  const double t = 1000.0;
  auto toy = ZeroTable::make(900.0, 1100.0, {t - 1.0, t + 1.0}, true);
  CHECK(lorentz_sum(1.5, t, toy, false).value == doctest::Approx(1.0).epsilon(1e-14));

  auto z = find_zeros(800.0, 1200.0);
  double g = z.in_range(995.0, 1005.0).front();
  double delta = 0.1;
  CHECK(lorentz_sum(0.5 + delta, g, z, false).value >= 1.0 / delta);

  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    double s = 900.0 + 4.0 * i + 0.123;
    double d = 1.0 / std::log(s);
    worst = std::max(worst, lorentz_sum(0.5 + d, s, z, true).value * d / std::log(s));
  }
  CHECK(worst <= 3.0);
}

TEST_CASE("explicit formula residual") {
  auto z = find_zeros(10.0, 2600.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    double t = 1000.0 + 50.0 * i + 0.377;
    auto w = z.in_range(t - 500.0, t + 500.0);
    auto win = ZeroTable::make(t - 500.0, t + 500.0, {w.begin(), w.end()}, true);
    worst = std::max(worst, std::fabs(explicit_formula_residual(0.5 + 1.0 / std::log(t), t, win)));
    CHECK(std::fabs(explicit_formula_residual(1.5, t, win)) <= 0.05);
  }
  CHECK(worst <= 0.05);

  // Enlarging the window only moves mass between the exact sum and the tail.
  const double t = 1500.3;
  auto narrow = z.in_range(t - 300.0, t + 300.0);
  auto wide = z.in_range(t - 800.0, t + 800.0);
  auto a = ZeroTable::make(t - 300.0, t + 300.0, {narrow.begin(), narrow.end()}, true);
  auto b = ZeroTable::make(t - 800.0, t + 800.0, {wide.begin(), wide.end()}, true);
  double sigma = 0.5 + 1.0 / std::log(t);
  auto la = lorentz_sum(sigma, t, a, true), lb = lorentz_sum(sigma, t, b, true);
  CHECK(std::fabs(la.value - lb.value) <= la.tail_uncertainty + lb.tail_uncertainty);
}

TEST_CASE("lorentz kernel matches the direct sum") {
  auto z = find_zeros(10.0, 1200.0);
  const double delta = 1.0 / std::log(1000.0);
  LorentzKernel k(z, delta);
  for (double t : {1000.1, 1033.7, 1099.9}) {
    double direct = lorentz_sum(0.5 + delta, t, z, true).value;
    CHECK(k(t) == doctest::Approx(direct).epsilon(1e-3));
  }
}
