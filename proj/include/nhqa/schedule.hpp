#pragma once

#include <cmath>
#include <stdexcept>

#include "nhqa/params.hpp"

namespace nhqa {

enum class ScheduleKind { Linear, NonlinearArctan };

// Time profile of the complex coupling h(t).
//
// Linear:          h(t) = h0 (1 - t/tau) on [0, tau], 0 afterwards.
// NonlinearArctan: h(t) = h0 (1 - f(t)) with
//                  f(t) = 1/2 + (delta/2) tan(beta (2t/tau - 1)),
//                  beta = arctan(1/delta),
// which satisfies f(0) = 0 and f(tau) = 1 identically since
// tan(beta) = 1/delta.
struct Schedule {
  ScheduleKind kind = ScheduleKind::Linear;
  AnnealParams params;
  double beta = 0.0;  // arctan(1/delta); nonlinear only
};

inline Schedule make_schedule(ScheduleKind kind, const AnnealParams& params) {
  Schedule s;
  s.kind = kind;
  s.params = params;
  if (kind == ScheduleKind::NonlinearArctan) {
    if (!(params.delta > 0.0))
      throw std::invalid_argument(
          "make_schedule: the arctan profile needs delta > 0 "
          "(beta -> pi/2 turns f into a step)");
    s.beta = std::atan(1.0 / params.delta);
  }
  return s;
}

namespace detail {

// f on u = 2t/tau - 1 in [-1, 1].  Near u = -1 the direct form subtracts two
// O(1) quantities (tan(beta u) -> -1/delta); the tan addition theorem gives
// the cancellation-free rational form
//   f = (1 + delta^2) T / (2 (delta + T)),   T = tan(beta (1 + u)) >= 0,
// which is exact at the endpoint.  Mirror symmetry f(-u) = 1 - f(u) covers
// the right edge.
inline double arctan_profile(double delta, double beta, double u) {
  if (u < -0.999) {
    const double t_small = std::tan(beta * (1.0 + u));
    return (1.0 + delta * delta) * t_small / (2.0 * (delta + t_small));
  }
  if (u > 0.999) {
    const double t_small = std::tan(beta * (1.0 - u));
    return 1.0 - (1.0 + delta * delta) * t_small / (2.0 * (delta + t_small));
  }
  return 0.5 + 0.5 * delta * std::tan(beta * u);
}

inline double arctan_profile_complement(double delta, double beta, double u) {
  return arctan_profile(delta, beta, -u);  // 1 - f(u), cancellation-free
}

}  // namespace detail

// f(t); monotone from f(0) = 0 to f(tau) = 1 for both kinds.
inline double profile_f(const Schedule& s, double t) {
  if (t < 0.0 || t > s.params.tau)
    throw std::invalid_argument("profile_f: t outside [0, tau]");
  if (s.kind == ScheduleKind::Linear) return t / s.params.tau;
  return detail::arctan_profile(s.params.delta, s.beta, 2.0 * t / s.params.tau - 1.0);
}

// df/dt expressed through f itself.  Linear: the constant 1/tau.  Arctan:
// (beta delta / tau) (1 + ((1-2f)/delta)^2), strictly positive, minimal at
// f = 1/2.
inline double profile_rate(const Schedule& s, double f_value) {
  if (s.kind == ScheduleKind::Linear) return 1.0 / s.params.tau;
  const double w = (1.0 - 2.0 * f_value) / s.params.delta;
  return s.beta * s.params.delta / s.params.tau * (1.0 + w * w);
}

// h(t).  Exactly h0 at t = 0 and exactly 0 for t >= tau, both schedules.
inline complexd coupling(const Schedule& s, double t) {
  if (t < 0.0) throw std::invalid_argument("coupling: t must be >= 0");
  const double tau = s.params.tau;
  if (t >= tau) return complexd(0.0, 0.0);
  if (s.kind == ScheduleKind::Linear) return s.params.h0 * (1.0 - t / tau);
  return s.params.h0 *
         detail::arctan_profile_complement(s.params.delta, s.beta, 2.0 * t / tau - 1.0);
}

// Integral of h over [0, t], in closed form.  Linear: h0 (t - t^2/(2 tau)).
// Arctan: h0 (t - F(t)) with F = int f = t/2 + (delta tau / 4 beta)
// log(cos(beta)/cos(beta u)).  Both reach h0 tau / 2 at t = tau.
inline complexd coupling_integral(const Schedule& s, double t) {
  if (t < 0.0) throw std::invalid_argument("coupling_integral: t must be >= 0");
  const double tau = s.params.tau;
  const double tc = std::min(t, tau);
  if (s.kind == ScheduleKind::Linear)
    return s.params.h0 * (tc - tc * tc / (2.0 * tau));
  const double u = 2.0 * tc / tau - 1.0;
  const double log_ratio = std::log(std::cos(s.beta)) - std::log(std::cos(s.beta * u));
  const double int_f = tc / 2.0 + s.params.delta * tau / (4.0 * s.beta) * log_ratio;
  return s.params.h0 * (tc - int_f);
}

}  // namespace nhqa
