#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>

#include "nhqa/sweep.hpp"

using nhqa::IntegratorConfig;
using nhqa::LinearFit;
using nhqa::make_params;
using nhqa::make_schedule;
using nhqa::ScheduleKind;
using nhqa::SweepAxis;
using nhqa::SweepPoint;
using nhqa::SweepRequest;
using nhqa::TauStarResult;

TEST_CASE("axis names", "[sweep]") {
  CHECK(nhqa::parse_axis("g") == SweepAxis::G);
  CHECK(nhqa::parse_axis("delta") == SweepAxis::Delta);
  CHECK(nhqa::parse_axis("tau") == SweepAxis::Tau);
  CHECK(nhqa::parse_axis("log2n") == SweepAxis::Log2N);
  CHECK_THROWS_AS(nhqa::parse_axis("epsilon"), std::invalid_argument);
}

TEST_CASE("linear fit", "[sweep]") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> y{5.0, 8.0, 11.0, 14.0};
  const LinearFit fit = nhqa::linear_fit(x, y);
  CHECK_THAT(fit.slope, Catch::Matchers::WithinRel(3.0, 1e-12));
  CHECK_THAT(fit.intercept, Catch::Matchers::WithinRel(2.0, 1e-12));
  CHECK_THAT(fit.r_squared, Catch::Matchers::WithinAbs(1.0, 1e-12));

  const LinearFit flat = nhqa::linear_fit(x, {7.0, 7.0, 7.0, 7.0});
  CHECK(flat.slope == 0.0);
  CHECK(flat.r_squared == 1.0);

  CHECK_THROWS_AS(nhqa::linear_fit({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(nhqa::linear_fit({2.0, 2.0}, {1.0, 3.0}), std::invalid_argument);
}

TEST_CASE("sweep runs every grid point", "[sweep]") {
  SweepRequest req;
  req.g = 2.0;
  req.delta = 0.01;
  req.log2_n = 6;
  req.axis = SweepAxis::Tau;
  req.grid = {40.0, 80.0, 120.0};
  req.config.output_samples = 2;
  const auto rows = nhqa::run_sweep(req);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].tau == req.grid[i]);
    CHECK(rows[i].error.empty());
    CHECK(rows[i].transition_prob >= 0.0);
    CHECK(rows[i].transition_prob <= 1.0);
    CHECK(rows[i].min_gap > 0.0);
  }
}

TEST_CASE("a failing point stays in-row", "[sweep]") {
  SweepRequest req;
  req.axis = SweepAxis::Log2N;
  req.grid = {4.0, 3.5};
  req.config.output_samples = 2;
  req.tau = 30.0;
  const auto rows = nhqa::run_sweep(req);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK_FALSE(rows[1].error.empty());
  CHECK(std::isnan(rows[1].transition_prob));

  SweepRequest empty = req;
  empty.grid.clear();
  CHECK_THROWS_AS(nhqa::run_sweep(empty), std::invalid_argument);
}

TEST_CASE("parallel sweeps are bitwise deterministic", "[sweep]") {
  SweepRequest req;
  req.g = 1.5;
  req.delta = 0.02;
  req.log2_n = 5;
  req.axis = SweepAxis::Tau;
  req.grid = {20.0, 35.0, 50.0, 65.0, 80.0, 95.0, 110.0, 125.0};
  req.config.output_samples = 2;
  req.parallelism = 1;
  const auto seq = nhqa::run_sweep(req);
  req.parallelism = 4;
  const auto par = nhqa::run_sweep(req);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].transition_prob == par[i].transition_prob);
    CHECK(seq[i].survival_prob == par[i].survival_prob);
    CHECK(seq[i].min_gap == par[i].min_gap);
  }
}

TEST_CASE("time to target probability", "[sweep]") {
  const TauStarResult r =
      nhqa::find_tau_star(1.0, 0.0, 4, ScheduleKind::Linear, 0.5, IntegratorConfig{});
  REQUIRE(r.error.empty());
  CHECK_THAT(r.tau_star, Catch::Matchers::WithinRel(11.4814, 1e-2));
  CHECK(r.probability >= 0.5);

  // below the last crossing the target is genuinely missed
  const auto p9 = make_params(1.0, 0.0, 0.9 * r.tau_star, 4);
  IntegratorConfig c;
  c.output_samples = 2;
  const double below =
      nhqa::integrate(p9, make_schedule(ScheduleKind::Linear, p9), c).final_transition();
  CHECK(below < 0.5);

  const TauStarResult bad =
      nhqa::find_tau_star(1.0, 0.0, 4, ScheduleKind::Linear, 1.5, IntegratorConfig{});
  CHECK(bad.error == "find_tau_star: target_p must lie in (0, 1)");
}

TEST_CASE("scaling report validation", "[sweep]") {
  CHECK_THROWS_AS(nhqa::run_scaling(2.0, 0.01, {10}, 0.9, ScheduleKind::Linear,
                                    IntegratorConfig{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(nhqa::run_scaling(2.0, 0.01, {10, 12}, 0.0, ScheduleKind::Linear,
                                    IntegratorConfig{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(nhqa::run_scaling(2.0, 0.01, {10, 12}, 1.0, ScheduleKind::Linear,
                                    IntegratorConfig{}),
                  std::invalid_argument);
}
