#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhqa/errors.hpp"
#include "nhqa/ode.hpp"
#include "nhqa/params.hpp"
#include "nhqa/schedule.hpp"
#include "nhqa/spectrum.hpp"

namespace nhqa {

// Bare integrates c = (c1, c0) directly; PhaseFactored integrates
// U_a = c_a exp(-(i/2) int eps dt), which strips the fastest common phase,
// and reinstates the factor (modulus included, it decays for delta > 0)
// at every output sample.
enum class Picture { Bare, PhaseFactored };

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.0;  // 0 = tau/1000
  int output_samples = 2000;
  Picture picture = Picture::PhaseFactored;
};

inline void validate(const IntegratorConfig& c) {
  if (!(c.rel_tol > 0.0) || !(c.abs_tol > 0.0))
    throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
  if (c.output_samples < 2)
    throw std::invalid_argument("IntegratorConfig: output_samples must be >= 2");
}

// P = |c1|^2 / (|c0|^2 + |c1|^2): the normalized population of |psi1>,
// invariant under rescaling of the state.
inline double transition_probability(complexd c0, complexd c1) {
  const double n0 = std::norm(c0);
  const double n1 = std::norm(c1);
  if (n0 + n1 == 0.0)
    throw numeric_error("transition_probability: state fully decayed (both amplitudes zero)");
  return n1 / (n0 + n1);
}

// Tr rho for the unnormalized pure state: |c0|^2 + |c1|^2.
inline double survival_probability(complexd c0, complexd c1) {
  return std::norm(c0) + std::norm(c1);
}

// Probability of finding the marked item itself: |m> = sin(alpha/2)|psi0> -
// cos(alpha/2)|psi1>, which differs from |psi1> by O(1/sqrt(N)) overlap.
inline double marked_state_probability(const AnnealParams& p, complexd c0, complexd c1) {
  const double n0 = std::norm(c0);
  const double n1 = std::norm(c1);
  if (n0 + n1 == 0.0)
    throw numeric_error("marked_state_probability: state fully decayed (both amplitudes zero)");
  return std::norm(p.sin_half * c0 - p.cos_half * c1) / (n0 + n1);
}

// |<n|psi>|^2 / <psi|psi>.  n is a 0-based vector subscript.
inline double measurement_probability(const Eigen::VectorXcd& state, Eigen::Index n) {
  if (n < 0 || n >= state.size())
    throw std::invalid_argument("measurement_probability: index out of range");
  const double total = state.squaredNorm();
  if (total == 0.0) throw numeric_error("measurement_probability: zero-norm state");
  return std::norm(state[n]) / total;
}

struct Trajectory {
  AnnealParams params;
  Schedule schedule;
  IntegratorConfig config;
  std::vector<double> times;
  std::vector<complexd> c0;  // amplitude on |psi0>
  std::vector<complexd> c1;  // amplitude on |psi1>
  std::vector<double> transition_prob;
  std::vector<double> survival_prob;
  std::vector<Spectrum> spectra;

  double final_transition() const { return transition_prob.back(); }
  double final_survival() const { return survival_prob.back(); }
};

namespace detail {

inline std::vector<double> output_grid(double tau, int samples) {
  std::vector<double> ts(samples);
  for (int k = 0; k < samples; ++k)
    ts[k] = tau * static_cast<double>(k) / (samples - 1);
  return ts;
}

inline void push_sample(Trajectory& tr, const AnnealParams& p, const Schedule& s, double t,
                        complexd c0, complexd c1) {
  if (std::abs(c0) < 1e-300 && std::abs(c1) < 1e-300)
    throw numeric_error("integrate: state fully decayed below representable range at t = " +
                        std::to_string(t));
  tr.times.push_back(t);
  tr.c0.push_back(c0);
  tr.c1.push_back(c1);
  tr.transition_prob.push_back(transition_probability(c0, c1));
  tr.survival_prob.push_back(survival_probability(c0, c1));
  tr.spectra.push_back(spectrum(p, coupling(s, t)));
}

}  // namespace detail

// Integrates i dc/dt = H_ef(t) c from (c0, c1) = (1, 0) with no
// renormalization: the decay of |c| is the observable.  Internal state
// ordering is (c1, c0), matching the basis {psi1, psi0} of H_ef.
inline Trajectory integrate(const AnnealParams& params, const Schedule& schedule,
                            const IntegratorConfig& config = {}) {
  validate(config);

  OdeOptions opt;
  opt.rel_tol = config.rel_tol;
  opt.abs_tol = config.abs_tol;
  opt.max_step = config.max_step > 0.0 ? config.max_step : params.tau / 1000.0;

  Trajectory tr;
  tr.params = params;
  tr.schedule = schedule;
  tr.config = config;
  const auto grid = detail::output_grid(params.tau, config.output_samples);
  tr.times.reserve(grid.size());

  const double sa2 = 0.5 * params.sin_alpha;
  const double ca = params.cos_alpha;
  Eigen::Vector2cd v0(0.0, 1.0);  // (c1, c0) = (0, 1)
  const complexd im(0.0, 1.0);

  if (config.picture == Picture::Bare) {
    auto rhs = [&](double t, const Eigen::Vector2cd& v, Eigen::Vector2cd& dv) {
      const complexd h = coupling(schedule, t);
      const complexd half_eps = 0.5 * (h + 1.0);
      const complexd oz2 = 0.5 * (h - ca);
      dv[0] = -im * ((oz2 - half_eps) * v[0] + sa2 * v[1]);
      dv[1] = -im * (sa2 * v[0] + (-oz2 - half_eps) * v[1]);
    };
    integrate_dopri5(rhs, v0, 0.0, params.tau, opt, grid,
                     [&](std::size_t, double t, const Eigen::Vector2cd& v) {
                       detail::push_sample(tr, params, schedule, t, v[1], v[0]);
                     });
  } else {
    auto rhs = [&](double t, const Eigen::Vector2cd& v, Eigen::Vector2cd& dv) {
      const complexd h = coupling(schedule, t);
      const complexd oz2 = 0.5 * (h - ca);
      dv[0] = -im * (oz2 * v[0] + sa2 * v[1]);
      dv[1] = -im * (sa2 * v[0] - oz2 * v[1]);
    };
    integrate_dopri5(rhs, v0, 0.0, params.tau, opt, grid,
                     [&](std::size_t, double t, const Eigen::Vector2cd& v) {
                       // c_a = U_a exp((i/2) int_0^t eps dt'), eps = h + 1
                       const complexd phase =
                           std::exp(0.5 * im * (t + coupling_integral(schedule, t)));
                       detail::push_sample(tr, params, schedule, t, v[1] * phase,
                                           v[0] * phase);
                     });
  }
  return tr;
}

struct FullTrajectory {
  Trajectory projected;         // amplitudes projected on {psi0, psi1}
  Eigen::MatrixXcd amplitudes;  // samples x N, computational basis
  std::vector<double> out_of_subspace;  // norm of the component outside span{psi0, psi1}

  double max_out_of_subspace() const {
    double m = 0.0;
    for (double v : out_of_subspace) m = std::max(m, v);
    return m;
  }
};

// Integrates the full N-level equation from |psi0> = (1/sqrt(N)) sum |i>.
// The dynamics must stay inside span{psi0, psi1}; out_of_subspace records the
// leakage (it is zero up to roundoff, which is the reduction theorem).
inline FullTrajectory integrate_full(std::int64_t n_items, std::int64_t marked_index,
                                     const Schedule& schedule,
                                     const IntegratorConfig& config = {}) {
  if (n_items < 2 || n_items > 1024)
    throw std::invalid_argument("integrate_full: n_items must be in [2, 1024]");
  if (marked_index < 1 || marked_index > n_items)
    throw std::invalid_argument("integrate_full: marked_index must be in [1, N]");
  validate(config);

  const AnnealParams& params = schedule.params;
  if (params.n_items != n_items)
    throw std::invalid_argument("integrate_full: schedule was built for a different N");

  OdeOptions opt;
  opt.rel_tol = config.rel_tol;
  opt.abs_tol = config.abs_tol;
  opt.max_step = config.max_step > 0.0 ? config.max_step : params.tau / 1000.0;

  const auto n = static_cast<Eigen::Index>(n_items);
  const auto m = static_cast<Eigen::Index>(marked_index - 1);
  const double inv_sqrt_n = params.sin_half;
  const complexd im(0.0, 1.0);

  FullTrajectory full;
  full.projected.params = params;
  full.projected.schedule = schedule;
  full.projected.config = config;
  const auto grid = detail::output_grid(params.tau, config.output_samples);
  full.amplitudes.resize(static_cast<Eigen::Index>(grid.size()), n);

  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(n, complexd(inv_sqrt_n, 0.0));

  // H0 psi = -psi_m e_m;  H1 psi = -(sum psi / N) * ones
  auto rhs = [&](double t, const Eigen::VectorXcd& v, Eigen::VectorXcd& dv) {
    const complexd h = coupling(schedule, t);
    const complexd mean = v.sum() / static_cast<double>(n_items);
    dv.setConstant(im * h * mean);
    dv[m] += im * v[m];
  };

  auto observe = [&](std::size_t idx, double t, const Eigen::VectorXcd& v) {
    const complexd c0 = v.sum() * inv_sqrt_n;
    const complexd c1 = (params.sin_half * c0 - v[m]) / params.cos_half;
    full.amplitudes.row(static_cast<Eigen::Index>(idx)) = v.transpose();
    // explicit residual vector: cancellation-free norm of the leakage
    Eigen::VectorXcd perp = v;
    perp.array() -= c0 * inv_sqrt_n;
    perp.array() -= c1 * (params.sin_half * inv_sqrt_n) / params.cos_half;
    perp[m] += c1 / params.cos_half;
    full.out_of_subspace.push_back(perp.norm());
    detail::push_sample(full.projected, params, schedule, t, c0, c1);
  };

  integrate_dopri5(rhs, psi, 0.0, params.tau, opt, grid, observe);
  return full;
}

}  // namespace nhqa
