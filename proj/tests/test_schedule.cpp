#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nhqa/params.hpp"
#include "nhqa/schedule.hpp"

using nhqa::complexd;
using nhqa::make_params;
using nhqa::make_schedule;
using nhqa::Schedule;
using nhqa::ScheduleKind;

namespace {

const auto kParams = make_params(2.0, 0.05, 137.0, 9);
const Schedule kLinear = make_schedule(ScheduleKind::Linear, kParams);
const Schedule kArctan = make_schedule(ScheduleKind::NonlinearArctan, kParams);

}  // namespace

TEST_CASE("profile endpoints and midpoint", "[schedule]") {
  for (const Schedule& s : {kLinear, kArctan}) {
    CHECK_THAT(nhqa::profile_f(s, 0.0), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THAT(nhqa::profile_f(s, kParams.tau), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(nhqa::profile_f(s, 0.5 * kParams.tau), Catch::Matchers::WithinAbs(0.5, 1e-12));
  }
}

TEST_CASE("profile is monotone", "[schedule]") {
  for (const Schedule& s : {kLinear, kArctan}) {
    double prev = 0.0;
    for (int k = 1; k <= 200; ++k) {
      const double f = nhqa::profile_f(s, kParams.tau * k / 200.0);
      CHECK(f >= prev);
      prev = f;
    }
  }
}

TEST_CASE("rate matches a finite difference of f", "[schedule]") {
  const double h = 1e-5 * kParams.tau;
  for (const Schedule& s : {kLinear, kArctan}) {
    for (double frac : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double t = frac * kParams.tau;
      const double fd = (nhqa::profile_f(s, t + h) - nhqa::profile_f(s, t - h)) / (2.0 * h);
      const double rate = nhqa::profile_rate(s, nhqa::profile_f(s, t));
      CHECK_THAT(fd, Catch::Matchers::WithinRel(rate, 1e-6));
    }
  }
}

TEST_CASE("arctan profile inverts in closed form", "[schedule]") {
  // t(f) = tau/2 + (tau / 2 beta) atan((2f - 1)/delta)
  for (double f : {0.01, 0.2, 0.5, 0.8, 0.99}) {
    const double t = 0.5 * kParams.tau +
                     0.5 * kParams.tau / kArctan.beta * std::atan((2.0 * f - 1.0) / kParams.delta);
    CHECK_THAT(nhqa::profile_f(kArctan, t), Catch::Matchers::WithinAbs(f, 1e-12));
  }
}

TEST_CASE("coupling endpoints are exact", "[schedule]") {
  for (const Schedule& s : {kLinear, kArctan}) {
    CHECK(nhqa::coupling(s, 0.0) == kParams.h0);
    CHECK(nhqa::coupling(s, kParams.tau) == complexd(0.0, 0.0));
    CHECK(nhqa::coupling(s, 2.0 * kParams.tau) == complexd(0.0, 0.0));
  }
  CHECK(nhqa::coupling(kLinear, 0.25 * kParams.tau) == kParams.h0 * 0.75);
}

TEST_CASE("coupling integral matches Simpson quadrature", "[schedule]") {
  for (const Schedule& s : {kLinear, kArctan}) {
    for (double frac : {0.3, 0.7, 1.0}) {
      const double t = frac * kParams.tau;
      const int n = 4096;
      complexd acc = nhqa::coupling(s, 0.0) + nhqa::coupling(s, t);
      for (int k = 1; k < n; ++k)
        acc += nhqa::coupling(s, t * k / n) * (k % 2 == 1 ? 4.0 : 2.0);
      acc *= t / (3.0 * n);
      const complexd exact = nhqa::coupling_integral(s, t);
      CHECK_THAT(std::abs(acc - exact), Catch::Matchers::WithinAbs(0.0, 1e-10 * std::abs(exact)));
    }
  }
  // both schedules deposit the same total action h0 tau / 2
  CHECK_THAT(std::abs(nhqa::coupling_integral(kArctan, kParams.tau) -
                      kParams.h0 * (kParams.tau / 2.0)),
             Catch::Matchers::WithinAbs(0.0, 1e-10 * std::abs(kParams.h0) * kParams.tau));
}

TEST_CASE("domain and construction errors", "[schedule]") {
  CHECK_THROWS_AS(nhqa::profile_f(kLinear, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(nhqa::profile_f(kArctan, kParams.tau * 1.001), std::invalid_argument);
  CHECK_THROWS_AS(nhqa::coupling(kLinear, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(nhqa::coupling_integral(kArctan, -0.5), std::invalid_argument);
  const auto lossless = make_params(2.0, 0.0, 100.0, 8);
  CHECK_THROWS_AS(make_schedule(ScheduleKind::NonlinearArctan, lossless), std::invalid_argument);
  CHECK_NOTHROW(make_schedule(ScheduleKind::Linear, lossless));
}
