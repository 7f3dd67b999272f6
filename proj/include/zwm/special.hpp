#pragma once

#include <complex>

namespace zwm {

using cplx = std::complex<double>;

namespace special {

// log Gamma(z) on the principal branch continued from the right half plane.
// Throws PoleOfGamma at nonpositive integers.
cplx lgamma(cplx z);
cplx digamma(cplx z);

// log sin(z) and cot(z), stable for large |Im z|.
cplx log_sin(cplx z);
cplx cot(cplx z);

// B_{2k}/(2k)! for 1 <= k <= 60.
double bernoulli_over_factorial(int k);

}  // namespace special
}  // namespace zwm
