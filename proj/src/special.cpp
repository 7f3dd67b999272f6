#include "zwm/special.hpp"

#include <array>
#include <cmath>

#include "zwm/error.hpp"
#include "zwm/numeric.hpp"

namespace zwm::special {

namespace {

// B_{2k} / (2k (2k-1)) for the Stirling series.
constexpr std::array<double, 9> kStirling{
    1.0 / 12.0,           -1.0 / 360.0,        1.0 / 1260.0,
    -1.0 / 1680.0,        1.0 / 1188.0,        -691.0 / 360360.0,
    1.0 / 156.0,          -3617.0 / 122400.0,  43867.0 / 244188.0};

// B_{2k} / (2k) for the digamma series.
constexpr std::array<double, 8> kDigamma{
    1.0 / 12.0,  -1.0 / 120.0,  1.0 / 252.0,  -1.0 / 240.0,
    1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0, -3617.0 / 8160.0};

bool needs_shift(cplx z) {
  return z.real() < 10.0 && !(std::fabs(z.imag()) >= 12.0 && z.real() >= -2.0);
}

void check_pole(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw Error(ErrorCode::PoleOfGamma, "Gamma has a pole at z = " + std::to_string(z.real()));
}

}  // namespace

cplx lgamma(cplx z) {
  check_pole(z);
  cplx shift_log = 0.0;
  while (needs_shift(z)) {
    shift_log += std::log(z);
    z += 1.0;
  }
  cplx inv = 1.0 / z;
  cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx pw = inv;
  for (double c : kStirling) {
    series += c * pw;
    pw *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * kLogTwoPi + series - shift_log;
}

cplx digamma(cplx z) {
  check_pole(z);
  cplx shift = 0.0;
  while (needs_shift(z)) {
    shift += 1.0 / z;
    z += 1.0;
  }
  cplx inv2 = 1.0 / (z * z);
  cplx series = 0.0;
  cplx pw = inv2;
  for (double c : kDigamma) {
    series += c * pw;
    pw *= inv2;
  }
  return std::log(z) - 0.5 / z - series - shift;
}

cplx log_sin(cplx z) {
  const cplx I(0.0, 1.0);
  double y = z.imag();
  if (y > 1.0) return -I * z + std::log(0.5 * I) + std::log(1.0 - std::exp(2.0 * I * z));
  if (y < -1.0) return I * z + std::log(-0.5 * I) + std::log(1.0 - std::exp(-2.0 * I * z));
  return std::log(std::sin(z));
}

cplx cot(cplx z) {
  const cplx I(0.0, 1.0);
  double y = z.imag();
  if (y > 1.0) {
    cplx e = std::exp(2.0 * I * z);
    return I * (e + 1.0) / (e - 1.0);
  }
  if (y < -1.0) {
    cplx e = std::exp(-2.0 * I * z);
    return I * (1.0 + e) / (1.0 - e);
  }
  return std::cos(z) / std::sin(z);
}

namespace {

double zeta_even(int k) {
  if (k == 1) return kPi * kPi / 6.0;
  if (k == 2) return std::pow(kPi, 4) / 90.0;
  int s = 2 * k;
  constexpr int N = 32;
  double sum = 0.0;
  for (int n = N - 1; n >= 1; --n) sum += std::pow(double(n), -s);
  // Euler-Maclaurin tail from N with two correction terms.
  double tail = std::pow(double(N), 1 - s) / (s - 1) + 0.5 * std::pow(double(N), -s) +
                s / 12.0 * std::pow(double(N), -s - 1);
  return sum + tail;
}

struct BernoulliTable {
  std::array<double, 61> v{};
  BernoulliTable() {
    for (int k = 1; k <= 60; ++k) {
      double mag = 2.0 * zeta_even(k) * std::pow(kTwoPi, -2 * k);
      v[k] = (k % 2 == 1) ? mag : -mag;
    }
  }
};

}  // namespace

double bernoulli_over_factorial(int k) {
  static const BernoulliTable table;
  if (k < 1 || k > 60) throw Error(ErrorCode::InvalidArgument, "Bernoulli index out of range");
  return table.v[k];
}

}  // namespace zwm::special
