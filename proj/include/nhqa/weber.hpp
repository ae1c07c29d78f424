#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "nhqa/errors.hpp"
#include "nhqa/gamma.hpp"
#include "nhqa/parabolic_cylinder.hpp"
#include "nhqa/params.hpp"
#include "nhqa/propagate.hpp"

namespace nhqa {

// e^{i pi/4}, written exactly
inline const complexd kExpIPi4 = complexd(1.0, 1.0) / std::numbers::sqrt2;

// Closed form for the linear schedule: with z(t) = e^{i pi/4} (h(t) -
// cos(alpha)) / sqrt(gamma) and nu = sin^2(alpha) / (4 gamma), the
// phase-factored amplitudes solve the Weber equation and are combinations of
// D_{-i nu}(+-z), D_{-i nu - 1}(+-z).
struct WeberParams {
  complexd nu;
  complexd sqrt_gamma;  // principal branch
  complexd sqrt_i_nu;   // e^{i pi/4} sin(alpha) / (2 sqrt(gamma)), consistent with sqrt_gamma
  complexd z0;
  complexd z_tau;
  complexd a_const;  // A = D_{-i nu - 1}(-z0) Gamma(1 + i nu) / sqrt(2 pi)
  complexd b_const;  // B = D_{-i nu - 1}(+z0) Gamma(1 + i nu) / sqrt(2 pi)
};

struct WeberSolution {
  complexd u0;
  complexd u1;
  complexd z;
};

inline complexd weber_z(const WeberParams& wp, double t, const AnnealParams& p) {
  const complexd h = p.gamma * (p.tau - t);
  return kExpIPi4 * (h - p.cos_alpha) / wp.sqrt_gamma;
}

// Valid for the linear schedule only.  The scale of A and B fixes U0(z0) = 1,
// U1(z0) = 0 exactly (through the Wronskian identity i nu [D_{-i nu}(z)
// D_{-i nu - 1}(-z) + D_{-i nu - 1}(z) D_{-i nu}(-z)] = sqrt(2 pi) /
// Gamma(i nu)).
inline WeberParams weber_params(const AnnealParams& p) {
  if (p.sin2_alpha == 0.0) throw std::invalid_argument("weber_params: degenerate nu = 0");

  WeberParams wp;
  wp.sqrt_gamma = std::sqrt(p.gamma);
  wp.nu = p.sin2_alpha / (4.0 * p.gamma);
  wp.sqrt_i_nu = kExpIPi4 * p.sin_alpha / (2.0 * wp.sqrt_gamma);
  wp.z0 = weber_z(wp, 0.0, p);
  wp.z_tau = weber_z(wp, p.tau, p);

  const complexd inu(-wp.nu.imag(), wp.nu.real());
  const complexd scale = complex_gamma(1.0 + inu) / std::sqrt(2.0 * std::numbers::pi);
  wp.a_const = parabolic_cylinder_d(-inu - 1.0, -wp.z0) * scale;
  wp.b_const = parabolic_cylinder_d(-inu - 1.0, wp.z0) * scale;
  return wp;
}

inline WeberSolution weber_solution(const WeberParams& wp, double t, const AnnealParams& p) {
  if (t < 0.0 || t > p.tau)
    throw std::invalid_argument("weber_solution: t outside [0, tau]");
  WeberSolution sol;
  sol.z = weber_z(wp, t, p);
  const complexd inu(-wp.nu.imag(), wp.nu.real());
  sol.u0 = wp.a_const * parabolic_cylinder_d(-inu, sol.z) +
           wp.b_const * parabolic_cylinder_d(-inu, -sol.z);
  sol.u1 = wp.sqrt_i_nu * (wp.b_const * parabolic_cylinder_d(-inu - 1.0, -sol.z) -
                           wp.a_const * parabolic_cylinder_d(-inu - 1.0, sol.z));
  return sol;
}

inline double weber_transition_probability(const WeberParams& wp, const AnnealParams& p) {
  const WeberSolution sol = weber_solution(wp, p.tau, p);
  return transition_probability(sol.u0, sol.u1);
}

// Large-|z| estimate of U0(z_tau) / U1(z_tau), diagnostic only.  Valid once
// |z0| clears the asymptotic regime; in_regime flags that.
struct AsymptoticRatio {
  complexd ratio;
  bool in_regime;

  double transition_probability() const { return 1.0 / (1.0 + std::norm(ratio)); }
};

inline AsymptoticRatio asymptotic_ratio(const WeberParams& wp) {
  const complexd inu(-wp.nu.imag(), wp.nu.real());
  const complexd correction =
      1.0 - std::exp(-0.5 * wp.z0 * wp.z0) / (std::sqrt(2.0 * std::numbers::pi) * wp.z0);
  const complexd numer = -std::exp(-0.5 * std::numbers::pi * wp.nu - 0.5 * wp.z_tau * wp.z_tau) *
                         complex_gamma(1.0 + inu);
  const complexd denom =
      std::sqrt(2.0 * std::numbers::pi * wp.nu * complexd(0.0, 1.0)) * correction;
  AsymptoticRatio out;
  out.ratio = numer / denom;
  out.in_regime = std::abs(wp.z0) >= 5.0;
  return out;
}

// Hermitian limit: P = 1 - exp(-2 pi nu) with nu = tau / (g N).
inline double landau_zener_probability(const AnnealParams& p) {
  if (p.delta != 0.0)
    throw std::invalid_argument("landau_zener_probability: requires delta = 0");
  return -std::expm1(-2.0 * std::numbers::pi * p.tau / (p.g * p.n_real));
}

// Run-time scale for a target-probability anneal: tau ~ (g^2 / delta) ln N.
inline double nqa_time_estimate(const AnnealParams& p) {
  if (p.delta <= 0.0)
    throw std::invalid_argument("nqa_time_estimate: requires delta > 0");
  return p.g * p.g / p.delta * (static_cast<double>(p.log2_n) * std::numbers::ln2);
}

}  // namespace nhqa
