#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nhqa/params.hpp"

namespace nhqa {

namespace detail {

// Lanczos approximation, g = 7, 9 terms.  Valid for Re(z) >= 0.5; the
// reflection formula covers the rest of the plane.
inline complexd lanczos_gamma(complexd z) {
  static constexpr double kG = 7.0;
  static constexpr double kCoef[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  complexd x = kCoef[0];
  for (int i = 1; i < 9; ++i) x += kCoef[i] / (z + static_cast<double>(i));
  const complexd t = z + kG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

inline bool is_nonpositive_integer(complexd z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace detail

inline complexd complex_gamma(complexd z) {
  if (detail::is_nonpositive_integer(z))
    throw std::invalid_argument("complex_gamma: pole at nonpositive integer");
  if (z.real() >= 0.5) return detail::lanczos_gamma(z);
  // Gamma(z) Gamma(1-z) = pi / sin(pi z)
  return std::numbers::pi /
         (std::sin(std::numbers::pi * z) * detail::lanczos_gamma(1.0 - z));
}

// 1/Gamma(z) is entire; poles of Gamma map to exact zeros.
inline complexd complex_gamma_reciprocal(complexd z) {
  if (detail::is_nonpositive_integer(z)) return 0.0;
  if (z.real() >= 0.5) return 1.0 / detail::lanczos_gamma(z);
  return std::sin(std::numbers::pi * z) * detail::lanczos_gamma(1.0 - z) /
         std::numbers::pi;
}

}  // namespace nhqa
