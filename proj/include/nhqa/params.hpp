#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace nhqa {

using complexd = std::complex<double>;

// Physical configuration of one annealing run over a database of N = 2^log2_n
// items.  The mixing angle obeys sin(alpha/2) = 1/sqrt(N); all trigonometric
// values are derived from 1/N directly so they stay exact up to N = 2^62,
// where sin(alpha) underflows any naive route through alpha itself.
struct AnnealParams {
  double g = 0.0;      // dimensionless gain, > 0
  double delta = 0.0;  // dissipation, >= 0 (negative would amplify)
  double tau = 0.0;    // total anneal time, hbar = 1
  std::int64_t n_items = 0;
  int log2_n = 0;

  double alpha = 0.0;  // 2 asin(1/sqrt(N)), in (0, pi/2]
  complexd h0;         // g + i delta = gamma * tau
  complexd gamma;      // (g + i delta) / tau

  // cached trig of alpha, cancellation-free in 1/N
  double sin_half = 0.0;    // sin(alpha/2) = 1/sqrt(N)
  double cos_half = 0.0;    // sqrt(1 - 1/N)
  double sin_alpha = 0.0;   // (2/sqrt(N)) sqrt(1 - 1/N)
  double cos_alpha = 0.0;   // 1 - 2/N
  double sin2_alpha = 0.0;  // (4/N)(1 - 1/N)
  double n_real = 0.0;      // N as a double
};

inline AnnealParams make_params(double g, double delta, double tau, int log2_n) {
  if (!(g > 0.0) || !std::isfinite(g))
    throw std::invalid_argument("make_params: g must be positive and finite");
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw std::invalid_argument(
        "make_params: delta must be >= 0 (negative delta means gain, not dissipation)");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("make_params: tau must be positive and finite");
  if (log2_n < 1 || log2_n > 62)
    throw std::invalid_argument("make_params: log2_n must be in [1, 62]");

  AnnealParams p;
  p.g = g;
  p.delta = delta;
  p.tau = tau;
  p.log2_n = log2_n;
  p.n_items = std::int64_t{1} << log2_n;
  p.n_real = std::ldexp(1.0, log2_n);

  const double inv_n = std::ldexp(1.0, -log2_n);
  p.sin_half = std::sqrt(inv_n);
  p.cos_half = std::sqrt(1.0 - inv_n);
  p.alpha = 2.0 * std::asin(p.sin_half);
  p.sin_alpha = 2.0 * p.sin_half * p.cos_half;
  p.cos_alpha = 1.0 - 2.0 * inv_n;
  p.sin2_alpha = 4.0 * inv_n * (1.0 - inv_n);

  p.h0 = complexd(g, delta);
  p.gamma = p.h0 / tau;
  return p;
}

}  // namespace nhqa
