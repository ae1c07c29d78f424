#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "nhqa/params.hpp"
#include "nhqa/schedule.hpp"

namespace nhqa {

// Effective two-level Hamiltonian at coupling h, written in the basis
// {psi1 = (1,0), psi0 = (0,1)}:
//   H = -(eps/2) I + (1/2) Omega . sigma,
//   eps = h + 1,  Omega = (sin a, 0, h - cos a).
// trace = -eps, det = h (1 + cos a) / 2.
struct EffectiveHamiltonian {
  complexd epsilon;
  Eigen::Vector3cd omega_vec;
  Eigen::Matrix2cd matrix;
};

// Two nontrivial eigenvalues of the full Hamiltonian (the other N-2 vanish):
//   e0 = -(eps + omega)/2,  e1 = -(eps - omega)/2,
//   omega = sqrt(h^2 - 2 h cos a + 1).
struct Spectrum {
  complexd e0;
  complexd e1;
  complexd omega;        // e1 - e0
  double gap_magnitude;  // |omega|
};

// Branch: principal sqrt, so Re >= 0 with Im >= 0 on the cut.  This keeps
// e1 - e0 = omega consistent along any schedule.
inline complexd level_splitting(const AnnealParams& p, complexd h) {
  return std::sqrt(h * h - 2.0 * p.cos_alpha * h + 1.0);
}

inline Spectrum spectrum(const AnnealParams& p, complexd h) {
  Spectrum sp;
  const complexd eps = h + 1.0;
  sp.omega = level_splitting(p, h);
  sp.e0 = -0.5 * (eps + sp.omega);
  sp.e1 = -0.5 * (eps - sp.omega);
  sp.gap_magnitude = std::abs(sp.omega);
  return sp;
}

inline EffectiveHamiltonian effective_hamiltonian(const AnnealParams& p, complexd h) {
  EffectiveHamiltonian ef;
  ef.epsilon = h + 1.0;
  ef.omega_vec << complexd(p.sin_alpha, 0.0), complexd(0.0, 0.0), h - p.cos_alpha;
  const complexd half_eps = 0.5 * ef.epsilon;
  const complexd half_oz = 0.5 * (h - p.cos_alpha);
  const complexd half_ox = 0.5 * p.sin_alpha;
  ef.matrix << -half_eps + half_oz, half_ox, half_ox, -half_eps - half_oz;
  return ef;
}

// Minimum of |Omega(h(t))| over [0, tau]: coarse scan at `samples` points,
// then golden-section between the neighbours of the best sample.
// Returns (t_star, gap_min).
inline std::pair<double, double> min_gap_scan(const AnnealParams& p, const Schedule& s,
                                              int samples) {
  if (samples < 100) throw std::invalid_argument("min_gap_scan: samples must be >= 100");

  const double tau = p.tau;
  auto gap_at = [&](double t) { return std::abs(level_splitting(p, coupling(s, t))); };

  int best = 0;
  double best_gap = gap_at(0.0);
  for (int i = 1; i < samples; ++i) {
    const double t = tau * static_cast<double>(i) / (samples - 1);
    const double gp = gap_at(t);
    if (gp < best_gap) {
      best_gap = gp;
      best = i;
    }
  }

  double lo = tau * static_cast<double>(std::max(0, best - 1)) / (samples - 1);
  double hi = tau * static_cast<double>(std::min(samples - 1, best + 1)) / (samples - 1);

  static constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = gap_at(x1);
  double f2 = gap_at(x2);
  while (hi - lo > 1e-12 * tau) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = gap_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = gap_at(x2);
    }
  }
  const double t_star = 0.5 * (lo + hi);
  return {t_star, gap_at(t_star)};
}

// Dense N x N matrix H0 + h H1 with H0 = -|m><m| and H1 = -(1/N) ones.
// marked_index is 1-based (item labels, not subscripts).  Capped at N = 4096:
// past that the two-level reduction is the tool and dense storage a hazard.
inline Eigen::MatrixXcd build_full_hamiltonian(std::int64_t n_items, std::int64_t marked_index,
                                               complexd h) {
  if (n_items < 2 || n_items > 4096)
    throw std::invalid_argument("build_full_hamiltonian: n_items must be in [2, 4096]");
  if (marked_index < 1 || marked_index > n_items)
    throw std::invalid_argument("build_full_hamiltonian: marked_index must be in [1, N]");
  const auto n = static_cast<Eigen::Index>(n_items);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Constant(n, n, -h / static_cast<double>(n_items));
  m(marked_index - 1, marked_index - 1) -= 1.0;
  return m;
}

}  // namespace nhqa
