#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "nhqa/errors.hpp"
#include "nhqa/params.hpp"
#include "nhqa/propagate.hpp"
#include "nhqa/schedule.hpp"
#include "nhqa/spectrum.hpp"

using nhqa::AnnealParams;
using nhqa::complexd;
using nhqa::FullTrajectory;
using nhqa::integrate;
using nhqa::integrate_full;
using nhqa::IntegratorConfig;
using nhqa::make_params;
using nhqa::make_schedule;
using nhqa::Picture;
using nhqa::ScheduleKind;
using nhqa::Trajectory;

TEST_CASE("probability helpers", "[propagate]") {
  CHECK(nhqa::transition_probability(complexd(1.0, 0.0), complexd(0.0, 0.0)) == 0.0);
  CHECK(nhqa::transition_probability(complexd(0.0, 0.0), complexd(0.5, -0.5)) == 1.0);
  CHECK_THAT(nhqa::transition_probability(complexd(0.6, 0.0), complexd(0.0, 0.8)),
             Catch::Matchers::WithinRel(0.64, 1e-15));
  CHECK_THROWS_AS(nhqa::transition_probability(complexd(0.0, 0.0), complexd(0.0, 0.0)),
                  nhqa::numeric_error);
  CHECK(nhqa::survival_probability(complexd(0.6, 0.0), complexd(0.0, 0.8)) == 1.0);
  CHECK(nhqa::survival_probability(complexd(0.0, 0.0), complexd(0.0, 0.0)) == 0.0);
}

TEST_CASE("marked-state probability agrees with a database measurement", "[propagate]") {
  // embed (c0, c1) back into C^N and measure the marked item directly
  const auto p = make_params(2.0, 0.0, 10.0, 3);
  const complexd c0(0.31, -0.44), c1(-0.12, 0.57);
  const Eigen::Index m = 2;  // 0-based
  const double n = 8.0;
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(8, complexd(0.0, 0.0));
  for (Eigen::Index j = 0; j < 8; ++j) {
    const double w = (j == m) ? -p.cos_half : p.cos_half / (n - 1.0);
    v[j] = c0 / std::sqrt(n) + c1 * w;
  }
  CHECK_THAT(nhqa::marked_state_probability(p, c0, c1),
             Catch::Matchers::WithinRel(nhqa::measurement_probability(v, m), 1e-13));
  CHECK_THROWS_AS(nhqa::measurement_probability(v, 8), std::invalid_argument);
  CHECK_THROWS_AS(nhqa::measurement_probability(Eigen::VectorXcd::Zero(4), 0),
                  nhqa::numeric_error);
}

TEST_CASE("config validation", "[propagate]") {
  IntegratorConfig c;
  c.rel_tol = 0.0;
  CHECK_THROWS_AS(nhqa::validate(c), std::invalid_argument);
  c = IntegratorConfig{};
  c.abs_tol = -1e-12;
  CHECK_THROWS_AS(nhqa::validate(c), std::invalid_argument);
  c = IntegratorConfig{};
  c.output_samples = 1;
  CHECK_THROWS_AS(nhqa::validate(c), std::invalid_argument);
  CHECK_NOTHROW(nhqa::validate(IntegratorConfig{}));
}

TEST_CASE("trajectory grid and initial state", "[propagate]") {
  const auto p = make_params(2.0, 0.01, 50.0, 6);
  const auto s = make_schedule(ScheduleKind::Linear, p);
  IntegratorConfig c;
  c.output_samples = 11;
  const Trajectory tr = integrate(p, s, c);
  REQUIRE(tr.times.size() == 11);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == p.tau);
  CHECK(tr.times[4] == p.tau * 4.0 / 10.0);
  CHECK(tr.c0.front() == complexd(1.0, 0.0));
  CHECK(tr.c1.front() == complexd(0.0, 0.0));
  CHECK(tr.transition_prob.front() == 0.0);
  CHECK(tr.survival_prob.front() == 1.0);
  CHECK(tr.spectra.size() == 11);
  CHECK(tr.final_transition() == tr.transition_prob.back());
}

TEST_CASE("hermitian evolution conserves the norm", "[propagate]") {
  const auto p = make_params(2.0, 0.0, 300.0, 10);
  const auto s = make_schedule(ScheduleKind::Linear, p);
  IntegratorConfig c;
  c.rel_tol = 1e-12;
  c.abs_tol = 1e-14;
  c.output_samples = 301;
  const Trajectory tr = integrate(p, s, c);
  for (double ps : tr.survival_prob) CHECK_THAT(ps, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("pictures agree", "[propagate]") {
  {
    const auto p = make_params(2.0, 0.01, 500.0, 10);
    const auto s = make_schedule(ScheduleKind::Linear, p);
    IntegratorConfig cb;
    cb.picture = Picture::Bare;
    cb.output_samples = 501;
    IntegratorConfig cp = cb;
    cp.picture = Picture::PhaseFactored;
    const Trajectory tb = integrate(p, s, cb);
    const Trajectory tp = integrate(p, s, cp);
    for (std::size_t i = 0; i < tb.times.size(); ++i) {
      CHECK_THAT(std::abs(tb.c0[i] - tp.c0[i]), Catch::Matchers::WithinAbs(0.0, 5e-8));
      CHECK_THAT(std::abs(tb.c1[i] - tp.c1[i]), Catch::Matchers::WithinAbs(0.0, 5e-8));
      CHECK_THAT(tb.survival_prob[i],
                 Catch::Matchers::WithinRel(tp.survival_prob[i], 1e-6));
    }
  }
  {
    const auto p = make_params(2.0, 1e-3, 2000.0, 20);
    const auto s = make_schedule(ScheduleKind::NonlinearArctan, p);
    IntegratorConfig cb;
    cb.picture = Picture::Bare;
    cb.output_samples = 301;
    IntegratorConfig cp = cb;
    cp.picture = Picture::PhaseFactored;
    const Trajectory tb = integrate(p, s, cb);
    const Trajectory tp = integrate(p, s, cp);
    for (std::size_t i = 0; i < tb.times.size(); ++i) {
      CHECK_THAT(std::abs(tb.c0[i] - tp.c0[i]), Catch::Matchers::WithinAbs(0.0, 1e-6));
      CHECK_THAT(std::abs(tb.c1[i] - tp.c1[i]), Catch::Matchers::WithinAbs(0.0, 1e-6));
    }
  }
}

TEST_CASE("survival decays by the instantaneous loss rate", "[propagate]") {
  // d ln P_s / dt = 2 Im <psi|H|psi> / <psi|psi>
  auto check = [](const AnnealParams& p, const nhqa::Schedule& s) {
    IntegratorConfig c;
    c.output_samples = 20001;
    const Trajectory tr = integrate(p, s, c);
    const double dt = p.tau / 20000.0;
    for (int k = 1000; k < 20000; k += 1000) {
      const double fd =
          (std::log(tr.survival_prob[k + 1]) - std::log(tr.survival_prob[k - 1])) / (2.0 * dt);
      const Eigen::Matrix2cd H =
          nhqa::effective_hamiltonian(p, nhqa::coupling(s, tr.times[k])).matrix;
      const Eigen::Vector2cd psi(tr.c1[k], tr.c0[k]);
      const complexd expect = psi.adjoint() * H * psi;
      const double model = 2.0 * expect.imag() / psi.squaredNorm();
      const double scale = std::max({std::abs(fd), std::abs(model), 1e-6});
      INFO("t=" << tr.times[k]);
      CHECK_THAT(std::abs(fd - model), Catch::Matchers::WithinAbs(0.0, 1e-4 * scale));
    }
  };
  {
    const auto p = make_params(1.5, 0.02, 200.0, 8);
    check(p, make_schedule(ScheduleKind::Linear, p));
  }
  {
    const auto p = make_params(2.0, 0.05, 300.0, 10);
    check(p, make_schedule(ScheduleKind::NonlinearArctan, p));
  }
}

TEST_CASE("tolerance controls convergence", "[propagate]") {
  const auto p = make_params(2.0, 0.005, 800.0, 12);
  const auto s = make_schedule(ScheduleKind::Linear, p);
  auto run = [&](double rel) {
    IntegratorConfig c;
    c.rel_tol = rel;
    c.abs_tol = rel * 1e-2;
    c.output_samples = 2;
    return integrate(p, s, c).final_transition();
  };
  const double ref = run(1e-12);
  const double e6 = std::abs(run(1e-6) - ref);
  const double e8 = std::abs(run(1e-8) - ref);
  const double e10 = std::abs(run(1e-10) - ref);
  CHECK(e8 < e6);
  CHECK(e10 < e8);
  CHECK(e10 < 1e-9);
}

TEST_CASE("full database integration reduces exactly", "[propagate]") {
  const auto p = make_params(1.7, 0.01, 60.0, 3);
  const auto s = make_schedule(ScheduleKind::Linear, p);
  IntegratorConfig c;
  c.output_samples = 101;
  const Trajectory red = integrate(p, s, c);
  const FullTrajectory full = integrate_full(8, 2, s, c);
  for (std::size_t i = 0; i < red.times.size(); ++i) {
    CHECK_THAT(std::abs(red.c0[i] - full.projected.c0[i]),
               Catch::Matchers::WithinAbs(0.0, 1e-7));
    CHECK_THAT(std::abs(red.c1[i] - full.projected.c1[i]),
               Catch::Matchers::WithinAbs(0.0, 1e-7));
  }
  CHECK(full.max_out_of_subspace() < 1e-10);
  REQUIRE(full.amplitudes.rows() == 101);
  REQUIRE(full.amplitudes.cols() == 8);
  // unmarked amplitudes stay exchange-symmetric
  for (Eigen::Index j = 0; j < 8; ++j) {
    if (j == 1) continue;  // marked item, 0-based
    CHECK_THAT(std::abs(full.amplitudes(50, j) - full.amplitudes(50, 0)),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("marked index does not matter", "[propagate]") {
  const auto p = make_params(1.7, 0.01, 60.0, 3);
  const auto s = make_schedule(ScheduleKind::Linear, p);
  IntegratorConfig c;
  c.output_samples = 101;
  const FullTrajectory a = integrate_full(8, 1, s, c);
  const FullTrajectory b = integrate_full(8, 7, s, c);
  for (std::size_t i = 0; i < a.projected.times.size(); ++i) {
    CHECK_THAT(std::abs(a.projected.c0[i] - b.projected.c0[i]),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::abs(a.projected.c1[i] - b.projected.c1[i]),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("full integration argument checks", "[propagate]") {
  const auto p = make_params(1.7, 0.01, 60.0, 3);
  const auto s = make_schedule(ScheduleKind::Linear, p);
  CHECK_THROWS_AS(integrate_full(8, 0, s), std::invalid_argument);
  CHECK_THROWS_AS(integrate_full(8, 9, s), std::invalid_argument);
  CHECK_THROWS_AS(integrate_full(2048, 1, s), std::invalid_argument);
  CHECK_THROWS_AS(integrate_full(16, 1, s), std::invalid_argument);  // schedule built for N=8
}
