#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nhqa/errors.hpp"
#include "nhqa/gamma.hpp"
#include "nhqa/ode.hpp"
#include "nhqa/params.hpp"

namespace nhqa {

namespace detail {

inline void check_finite(complexd v, const char* regime) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw numeric_error(std::string("parabolic_cylinder_d: non-finite result in ") + regime +
                        " regime");
}

// Kummer M(a, b, x) by direct summation.  b is 1/2 or 3/2 here, never near a
// pole.
inline complexd kummer_m(complexd a, complexd b, complexd x) {
  complexd sum = 1.0;
  complexd term = 1.0;
  int small_count = 0;
  for (int k = 0; k < 1000; ++k) {
    term *= (a + static_cast<double>(k)) / (b + static_cast<double>(k)) * x /
            static_cast<double>(k + 1);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) {
      if (++small_count == 2) return sum;
    } else {
      small_count = 0;
    }
  }
  throw numeric_error("parabolic_cylinder_d: power series regime failed to converge");
}

// D_nu(z) = 2^{nu/2} e^{-z^2/4} [ sqrt(pi)/Gamma((1-nu)/2) M(-nu/2, 1/2, z^2/2)
//   - sqrt(2 pi) z / Gamma(-nu/2) M((1-nu)/2, 3/2, z^2/2) ]
inline complexd pcd_series(complexd nu, complexd z) {
  const complexd x = 0.5 * z * z;
  const complexd even = std::sqrt(std::numbers::pi) *
                        complex_gamma_reciprocal(0.5 * (1.0 - nu)) *
                        kummer_m(-0.5 * nu, 0.5, x);
  const complexd odd = std::sqrt(2.0 * std::numbers::pi) * z *
                       complex_gamma_reciprocal(-0.5 * nu) *
                       kummer_m(0.5 * (1.0 - nu), 1.5, x);
  const complexd result = std::exp(0.5 * nu * std::numbers::ln2 - 0.25 * z * z) * (even - odd);
  check_finite(result, "power series");
  return result;
}

// Truncated asymptotic sum S with D_nu(z) ~ e^{nu log z - z^2/4} S(z) for
// |arg z| <= pi/2: sum_k (-1)^k nu(nu-1)...(nu-2k+1) / (k! 2^k z^{2k})
inline complexd pcd_asymptotic_sum(complexd nu, complexd z) {
  const complexd inv_z2 = 1.0 / (z * z);
  complexd sum = 1.0;
  complexd term = 1.0;
  double best = 1.0;
  for (int k = 0; k < 200; ++k) {
    term *= -(nu - static_cast<double>(2 * k)) * (nu - static_cast<double>(2 * k + 1)) *
            inv_z2 / (2.0 * static_cast<double>(k + 1));
    const double mag = std::abs(term);
    if (mag > best) break;  // divergent tail reached
    sum += term;
    best = mag;
    if (mag <= 1e-17 * std::abs(sum)) break;
  }
  if (best > 1e-12 * std::max(std::abs(sum), 1e-300))
    throw numeric_error("parabolic_cylinder_d: asymptotic regime failed to converge");
  return sum;
}

inline complexd pcd_asymptotic_direct(complexd nu, complexd z) {
  const complexd result = std::exp(nu * std::log(z) - 0.25 * z * z) * pcd_asymptotic_sum(nu, z);
  check_finite(result, "asymptotic");
  return result;
}

// Connection formulas route |arg z| > pi/2 to arguments the direct expansion
// covers (-z and -+iz both land in |arg| <= pi/2).
inline complexd pcd_asymptotic(complexd nu, complexd z) {
  const double arg = std::arg(z);
  if (std::abs(arg) <= 0.5 * std::numbers::pi) return pcd_asymptotic_direct(nu, z);
  const complexd ipi(0.0, std::numbers::pi);
  const complexd cross =
      std::sqrt(2.0 * std::numbers::pi) * complex_gamma_reciprocal(-nu);
  complexd result;
  if (arg > 0.0) {
    result = std::exp(nu * ipi) * pcd_asymptotic_direct(nu, -z) +
             cross * std::exp(0.5 * (nu + 1.0) * ipi) *
                 pcd_asymptotic_direct(-nu - 1.0, complexd(0.0, -1.0) * z);
  } else {
    result = std::exp(-nu * ipi) * pcd_asymptotic_direct(nu, -z) +
             cross * std::exp(-0.5 * (nu + 1.0) * ipi) *
                 pcd_asymptotic_direct(-nu - 1.0, complexd(0.0, 1.0) * z);
  }
  check_finite(result, "asymptotic");
  return result;
}

// For Re(z^2) > 0 with |arg z| < pi/4, D_nu is the recessive solution: it
// decays like e^{-z^2/4} while the complementary one grows, so continuing
// outward from |z| = 4 amplifies anchor error by e^{Re(z^2)/2}.  Continue
// u = e^{z^2/4} D_nu inward from an asymptotic anchor instead: u solves
// u'' = z u' - nu u with no exponential behaviour in the target, and inward
// the contaminating solution is the decaying one.
inline complexd pcd_continuation_inward(complexd nu, complexd z) {
  const double r = std::abs(z);
  const complexd zhat = z / r;
  const complexd zhat2 = zhat * zhat;
  const double s_a = 45.0;

  const complexd za = zhat * s_a;
  const complexd log_za = std::log(za);
  const complexd ua = std::exp(nu * log_za) * pcd_asymptotic_sum(nu, za);
  // u'(z) = nu u_{nu-1}(z), from D'_nu = nu D_{nu-1} - (z/2) D_nu
  const complexd upa = nu * std::exp((nu - 1.0) * log_za) * pcd_asymptotic_sum(nu - 1.0, za);

  // state (u, du/dsigma) along z = zhat (s_a - sigma)
  Eigen::Vector2cd y(ua, -zhat * upa);
  OdeOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-16 * (std::abs(ua) + std::abs(upa) + 1.0);
  auto rhs = [&](double sig, const Eigen::Vector2cd& v, Eigen::Vector2cd& dv) {
    const double s = s_a - sig;
    dv[0] = v[1];
    dv[1] = -zhat2 * (s * v[1] + nu * v[0]);
  };
  complexd result;
  integrate_dopri5(rhs, y, 0.0, s_a - r, opt, {s_a - r},
                   [&](std::size_t, double, const Eigen::Vector2cd& v) { result = v[0]; });
  result *= std::exp(-0.25 * z * z);
  check_finite(result, "inward ode continuation");
  return result;
}

// Continuation of D''(z) = (z^2/4 - nu - 1/2) D(z) outward along the ray
// z(s) = zhat s, anchored at |z| = 4 by the power series.  Exact diagonal
// rays make both fundamental solutions neutral and any other stable ray makes
// D_nu dominant, so the forward integration stays well conditioned; the
// recessive configuration is routed to the inward scheme above.
inline complexd pcd_continuation(complexd nu, complexd z) {
  if ((z * z).real() > 0.0 && z.real() > 0.0) return pcd_continuation_inward(nu, z);
  const double r = std::abs(z);
  const complexd zhat = z / r;
  const complexd zhat2 = zhat * zhat;
  const double s0 = 4.0;

  const complexd anchor_z = zhat * s0;
  const complexd d0 = pcd_series(nu, anchor_z);
  // D'_nu(z) = nu D_{nu-1}(z) - (z/2) D_nu(z)
  const complexd dprime = nu * pcd_series(nu - 1.0, anchor_z) - 0.5 * anchor_z * d0;

  Eigen::Vector2cd y(d0, zhat * dprime);  // (D, dD/ds)
  OdeOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  auto rhs = [&](double s, const Eigen::Vector2cd& v, Eigen::Vector2cd& dv) {
    const complexd zs = zhat * s;
    dv[0] = v[1];
    dv[1] = zhat2 * (0.25 * zs * zs - nu - 0.5) * v[0];
  };
  complexd result;
  integrate_dopri5(rhs, y, s0, r, opt, {r},
                   [&](std::size_t, double, const Eigen::Vector2cd& v) { result = v[0]; });
  check_finite(result, "ode continuation");
  return result;
}

}  // namespace detail

// Parabolic cylinder function D_nu(z) for complex order and argument,
// principal branch.  Regimes: power series to |z| = 4, ODE continuation to
// |z| = 40, asymptotic expansion (with connection formulas past |arg z| =
// pi/2) beyond.
inline complexd parabolic_cylinder_d(complexd nu, complexd z) {
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) || !std::isfinite(z.real()) ||
      !std::isfinite(z.imag()))
    throw std::invalid_argument("parabolic_cylinder_d: non-finite input");
  const double r = std::abs(z);
  if (r > 1e4) throw std::invalid_argument("parabolic_cylinder_d: |z| > 1e4 unsupported");
  if (r <= 4.0) return detail::pcd_series(nu, z);
  if (r <= 40.0) return detail::pcd_continuation(nu, z);
  return detail::pcd_asymptotic(nu, z);
}

}  // namespace nhqa
