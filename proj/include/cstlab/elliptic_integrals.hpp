#pragma once

// Complete elliptic integrals in the parameter convention
//   K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt,  E(m) = int_0^{pi/2} (1 - m sin^2 t)^{1/2} dt,
// via the arithmetic-geometric mean. Negative m uses the imaginary-modulus
// transformation K(m) = K(m/(m-1))/sqrt(1-m), E(m) = sqrt(1-m) E(m/(m-1)).

#include <cmath>
#include <numbers>
#include <string>

#include "cstlab/errors.hpp"

namespace cstlab {

namespace detail {

struct AgmResult {
  double k;  // K at parameter 1 - mc
  double e;  // E at parameter 1 - mc
};

// AGM in terms of the complementary parameter mc = 1 - m, 0 < mc <= 1.
inline AgmResult agm_complete(double mc) {
  double a = 1.0;
  double b = std::sqrt(mc);
  double sum = 0.5 * (1.0 - mc);  // 2^{-1} c_0^2
  double pow2 = 0.5;
  for (int i = 0; i < 64; ++i) {
    const double c = 0.5 * (a - b);
    if (std::fabs(c) <= 1e-17 * a) break;
    pow2 *= 2.0;
    sum += pow2 * c * c;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  const double k = std::numbers::pi / (2.0 * a);
  return {k, k * (1.0 - sum)};
}

}  // namespace detail

inline double ellip_K(double m) {
  if (std::isnan(m)) throw DomainError("ellip_K: NaN parameter");
  if (m >= 1.0) throw DomainError("ellip_K: diverges for m >= 1 (m = " + std::to_string(m) + ")");
  if (m >= 0.0) return detail::agm_complete(1.0 - m).k;
  const double one_minus_m = 1.0 - m;
  return detail::agm_complete(1.0 / one_minus_m).k / std::sqrt(one_minus_m);
}

inline double ellip_E(double m) {
  if (std::isnan(m)) throw DomainError("ellip_E: NaN parameter");
  if (m > 1.0) throw DomainError("ellip_E: parameter m > 1 (m = " + std::to_string(m) + ")");
  if (m == 1.0) return 1.0;
  if (m >= 0.0) return detail::agm_complete(1.0 - m).e;
  const double one_minus_m = 1.0 - m;
  return detail::agm_complete(1.0 / one_minus_m).e * std::sqrt(one_minus_m);
}

}  // namespace cstlab
