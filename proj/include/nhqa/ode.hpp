#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "nhqa/errors.hpp"

namespace nhqa {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 = choose automatically
  long long max_steps = 100'000'000;
};

// Dormand-Prince 5(4) with FSAL and the quartic dense-output interpolant.
// State is any Eigen-style vector of std::complex<double> supporting
// coefficient access, size(), and linear arithmetic.
//
// rhs(t, y, dy) fills dy with y'(t).  observe(i, t, y) is called once per
// entry of sample_times (ascending, inside [t0, t1]); samples never advance
// the step sequence, they are interpolated inside accepted steps.
template <class State, class Rhs, class Observer>
void integrate_dopri5(Rhs&& rhs, State y, double t0, double t1, const OdeOptions& opt,
                      const std::vector<double>& sample_times, Observer&& observe) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  // y5 - y4 (embedded error) coefficients
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  // dense-output extension
  static constexpr double d1 = -12715105075.0 / 11282082432.0;
  static constexpr double d3 = 87487479700.0 / 32700410799.0;
  static constexpr double d4 = -10690763975.0 / 1880347072.0;
  static constexpr double d5 = 701980252875.0 / 199316789632.0;
  static constexpr double d6 = -1453857185.0 / 822651844.0;
  static constexpr double d7 = 69997945.0 / 29380423.0;

  if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: need t1 > t0");

  const auto n = y.size();
  State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y;
  State ytmp = y, ynew = y;

  auto scaled_rms = [&](const State& err, const State& y0, const State& y1) {
    double sum = 0.0;
    for (decltype(y.size()) i = 0; i < n; ++i) {
      const double sc =
          opt.abs_tol + opt.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const double q = std::abs(err[i]) / sc;
      sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(n));
  };

  double t = t0;
  rhs(t, y, k1);

  // starting step: standard two-probe heuristic
  double h = opt.initial_step;
  if (h <= 0.0) {
    double d0 = 0.0, d1n = 0.0;
    for (decltype(y.size()) i = 0; i < n; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d0 += std::norm(y[i] / sc);
      d1n += std::norm(k1[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1n = std::sqrt(d1n / static_cast<double>(n));
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * (d0 / d1n);
    h0 = std::min(h0, t1 - t0);
    ytmp = y + h0 * k1;
    rhs(t + h0, ytmp, k2);
    double d2 = 0.0;
    for (decltype(y.size()) i = 0; i < n; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
      d2 += std::norm((k2[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                    : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, t1 - t0});
  }
  h = std::min(h, opt.max_step);

  std::size_t next_sample = 0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    observe(next_sample, sample_times[next_sample], y);
    ++next_sample;
  }

  long long steps = 0;
  double facmax = 5.0;
  const double eps = std::numeric_limits<double>::epsilon();

  const double t_edge = 16.0 * eps * std::max({std::abs(t0), std::abs(t1), 1.0});
  while (t1 - t > t_edge) {
    h = std::min({h, opt.max_step, t1 - t});
    if (h < 16.0 * eps * std::max(std::abs(t), 1.0))
      throw numeric_error("integrate_dopri5: step size underflow at t = " + std::to_string(t) +
                          " (problem too stiff for the requested tolerance)");
    if (++steps > opt.max_steps)
      throw numeric_error("integrate_dopri5: exceeded " + std::to_string(opt.max_steps) +
                          " steps at t = " + std::to_string(t));

    ytmp = y + (h * a21) * k1;
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + (h * a31) * k1 + (h * a32) * k2;
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3;
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4;
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 + (h * a64) * k4 +
           (h * a65) * k5;
    rhs(t + h, ytmp, k6);
    ynew = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 + (h * b6) * k6;
    rhs(t + h, ynew, k7);

    ytmp = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 + (h * e6) * k6 +
           (h * e7) * k7;
    const double err = scaled_rms(ytmp, y, ynew);

    if (err <= 1.0) {
      // interpolate pending samples inside (t, t+h]
      if (next_sample < sample_times.size() && sample_times[next_sample] <= t + h) {
        const State dy = ynew - y;
        const State rcont3 = h * k1 - dy;
        const State rcont4 = 2.0 * dy - h * (k1 + k7);
        const State rcont5 =
            h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t + h) {
          const double theta = (sample_times[next_sample] - t) / h;
          const double th1 = 1.0 - theta;
          ytmp = y + theta * (dy + th1 * (rcont3 + theta * (rcont4 + th1 * rcont5)));
          observe(next_sample, sample_times[next_sample], ytmp);
          ++next_sample;
        }
      }
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, facmax);
      h *= fac;
      facmax = 5.0;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      facmax = 1.0;
    }
  }

  // flush samples that round past t1
  while (next_sample < sample_times.size()) {
    observe(next_sample, sample_times[next_sample], y);
    ++next_sample;
  }
}

}  // namespace nhqa
