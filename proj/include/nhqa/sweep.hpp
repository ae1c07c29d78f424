#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "nhqa/csv.hpp"
#include "nhqa/params.hpp"
#include "nhqa/propagate.hpp"
#include "nhqa/schedule.hpp"
#include "nhqa/spectrum.hpp"
#include "nhqa/weber.hpp"

namespace nhqa {

enum class SweepAxis { G, Delta, Tau, Log2N };

inline SweepAxis parse_axis(const std::string& name) {
  if (name == "g") return SweepAxis::G;
  if (name == "delta") return SweepAxis::Delta;
  if (name == "tau") return SweepAxis::Tau;
  if (name == "log2n") return SweepAxis::Log2N;
  throw std::invalid_argument("axis must be one of g, delta, tau, log2n");
}

struct SweepPoint {
  double g = 0.0;
  double delta = 0.0;
  double tau = 0.0;
  int log2_n = 0;
  double transition_prob = std::numeric_limits<double>::quiet_NaN();
  double survival_prob = std::numeric_limits<double>::quiet_NaN();
  double min_gap = std::numeric_limits<double>::quiet_NaN();
  double t_min_gap = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  std::string error;  // empty on success; failures stay in-row
};

struct SweepRequest {
  double g = 2.0;
  double delta = 0.0;
  double tau = 100.0;
  int log2_n = 10;
  ScheduleKind kind = ScheduleKind::Linear;
  IntegratorConfig config;
  SweepAxis axis = SweepAxis::Tau;
  std::vector<double> grid;
  int parallelism = 1;
};

namespace detail {

// Runs job(i) for i in [0, n) across `parallelism` threads.  Work is claimed
// from an atomic counter; results land at their grid index, so output order
// never depends on scheduling.
template <typename Job>
void run_indexed(std::size_t n, int parallelism, Job&& job) {
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(parallelism), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) job(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline std::vector<SweepPoint> run_sweep(const SweepRequest& req) {
  if (req.grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
  validate(req.config);

  std::vector<SweepPoint> rows(req.grid.size());
  detail::run_indexed(req.grid.size(), req.parallelism, [&](std::size_t i) {
    SweepPoint& row = rows[i];
    row.g = req.g;
    row.delta = req.delta;
    row.tau = req.tau;
    row.log2_n = req.log2_n;
    const auto start = std::chrono::steady_clock::now();
    try {
      const double v = req.grid[i];
      switch (req.axis) {
        case SweepAxis::G: row.g = v; break;
        case SweepAxis::Delta: row.delta = v; break;
        case SweepAxis::Tau: row.tau = v; break;
        case SweepAxis::Log2N:
          if (v != std::floor(v) || v < 1.0 || v > 62.0)
            throw std::invalid_argument("log2n grid value must be an integer in [1, 62]");
          row.log2_n = static_cast<int>(v);
          break;
      }
      const AnnealParams p = make_params(row.g, row.delta, row.tau, row.log2_n);
      const Schedule s = make_schedule(req.kind, p);
      const Trajectory tr = integrate(p, s, req.config);
      row.transition_prob = tr.final_transition();
      row.survival_prob = tr.final_survival();
      const auto [t_star, gap] = min_gap_scan(p, s, 2001);
      row.t_min_gap = t_star;
      row.min_gap = gap;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return rows;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need two or more (x, y) pairs");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate x grid");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

struct TauStarResult {
  int log2_n = 0;
  double tau_star = std::numeric_limits<double>::quiet_NaN();
  double probability = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
  std::string error;
};

// Minimal tau beyond which P_tau stays at or above target_p, i.e. the last
// upward crossing of the threshold.  P_tau(tau) rings around its envelope for
// finite sweeps, and at small N with delta > 0 it decays again at large tau,
// so the first transient crossing is not a usable time-to-target.  Doubling
// finds any achieving tau; a linear scan then locates the final crossing, with
// the horizon doubled until the top quarter of the scan is crossing-free; the
// bracketing step is bisected down to relative width tau_rel_tol.
inline TauStarResult find_tau_star(double g, double delta, int log2_n, ScheduleKind kind,
                                   double target_p, const IntegratorConfig& config,
                                   double tau_rel_tol = 1e-3) {
  TauStarResult out;
  out.log2_n = log2_n;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (!(target_p > 0.0 && target_p < 1.0))
      throw std::invalid_argument("find_tau_star: target_p must lie in (0, 1)");
    if (!(tau_rel_tol > 0.0))
      throw std::invalid_argument("find_tau_star: tau_rel_tol must be positive");
    IntegratorConfig probe = config;
    probe.output_samples = 2;  // only the endpoint matters here
    probe.max_step = 0.0;

    auto p_of_tau = [&](double tau) {
      const AnnealParams p = make_params(g, delta, tau, log2_n);
      const Schedule s = make_schedule(kind, p);
      return integrate(p, s, probe).final_transition();
    };

    double tau_hit = 1.0;
    int doublings = 0;
    while (p_of_tau(tau_hit) < target_p) {
      tau_hit *= 2.0;
      if (++doublings > 60)
        throw numeric_error("find_tau_star: no tau reaches target_p");
    }

    double lo = tau_hit / 2.0;
    double hi = 4.0 * tau_hit;
    constexpr int kScan = 1025;  // step fine enough for the O(10) ringing period at g ~ 1
    double blo = 0.0, bhi = 0.0;
    bool bracketed = false;
    for (int expand = 0; expand < 16 && !bracketed; ++expand) {
      const double step = (hi - lo) / (kScan - 1);
      std::vector<bool> above(kScan);
      for (int i = 0; i < kScan; ++i) above[i] = p_of_tau(lo + step * i) >= target_p;
      int last_up = -1, last_change = -1;
      for (int i = 0; i + 1 < kScan; ++i) {
        if (above[i] != above[i + 1]) last_change = i;
        if (!above[i] && above[i + 1]) last_up = i;
      }
      if (last_change >= 3 * (kScan - 1) / 4) {
        hi *= 2.0;  // still ringing near the horizon
        continue;
      }
      if (last_up >= 0) {
        blo = lo + step * last_up;
        bhi = blo + step;
        bracketed = true;
      } else if (above.front()) {
        bhi = lo;  // crossing below the scan window: walk down
        blo = lo / 2.0;
        while (p_of_tau(blo) >= target_p) {
          bhi = blo;
          blo /= 2.0;
          if (blo < tau_rel_tol) {
            out.tau_star = bhi;
            out.probability = p_of_tau(bhi);
            out.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return out;
          }
        }
        bracketed = true;
      } else {
        throw numeric_error("find_tau_star: achieving tau vanished inside scan window");
      }
    }
    if (!bracketed)
      throw numeric_error("find_tau_star: threshold still ringing at horizon limit");

    while (bhi - blo > tau_rel_tol * bhi) {
      const double mid = 0.5 * (blo + bhi);
      (p_of_tau(mid) >= target_p ? bhi : blo) = mid;
    }
    out.tau_star = bhi;
    out.probability = p_of_tau(bhi);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct ScalingReport {
  std::vector<TauStarResult> points;
  bool fit_vs_log = true;  // x = ln N for delta > 0, x = N for delta = 0
  LinearFit fit;
};

inline ScalingReport run_scaling(double g, double delta, const std::vector<int>& log2n_grid,
                                 double target_p, ScheduleKind kind,
                                 const IntegratorConfig& config, int parallelism = 1) {
  if (log2n_grid.size() < 2)
    throw std::invalid_argument("run_scaling: need at least two grid points");
  if (!(target_p > 0.0 && target_p < 1.0))
    throw std::invalid_argument("run_scaling: target_p must lie in (0, 1)");

  ScalingReport report;
  report.points.resize(log2n_grid.size());
  detail::run_indexed(log2n_grid.size(), parallelism, [&](std::size_t i) {
    report.points[i] = find_tau_star(g, delta, log2n_grid[i], kind, target_p, config);
  });

  report.fit_vs_log = delta > 0.0;
  std::vector<double> xs, ys;
  for (const TauStarResult& pt : report.points) {
    if (!pt.error.empty()) continue;
    xs.push_back(report.fit_vs_log ? static_cast<double>(pt.log2_n) * std::numbers::ln2
                                   : std::ldexp(1.0, pt.log2_n));
    ys.push_back(pt.tau_star);
  }
  if (xs.size() >= 2) report.fit = linear_fit(xs, ys);
  return report;
}

inline constexpr const char* kSweepCsvHeader =
    "g,delta,tau,log2n,p_tau,p_surv,min_gap,t_min_gap,wall_seconds,error";

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const SweepPoint& r : rows) {
    os << format_double(r.g) << ',' << format_double(r.delta) << ',' << format_double(r.tau)
       << ',' << r.log2_n << ',' << format_double(r.transition_prob) << ','
       << format_double(r.survival_prob) << ',' << format_double(r.min_gap) << ','
       << format_double(r.t_min_gap) << ',' << format_double(r.wall_seconds) << ','
       << r.error << '\n';
  }
}

inline constexpr const char* kScalingCsvHeader =
    "log2n,tau_star,p_at_tau_star,wall_seconds,error";

inline void write_scaling_csv(std::ostream& os, const ScalingReport& report) {
  os << kScalingCsvHeader << '\n';
  for (const TauStarResult& pt : report.points) {
    os << pt.log2_n << ',' << format_double(pt.tau_star) << ','
       << format_double(pt.probability) << ',' << format_double(pt.wall_seconds) << ','
       << pt.error << '\n';
  }
}

}  // namespace nhqa
