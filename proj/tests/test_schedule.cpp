#include <catch2/catch_amalgamated.hpp>

#include "sspvip/schedule.hpp"

using namespace sspvip;

TEST_CASE("constant schedule") {
  AlphaSchedule s = make_constant_schedule(0.5);
  CHECK(alpha_at(s, 0) == 0.5);
  CHECK(alpha_at(s, 1000) == 0.5);
  CHECK(alpha_min(s, 10) == 0.5);
  CHECK(alpha_partial_sum(s, 4) == 2.0);
  CHECK_THROWS_AS(make_constant_schedule(0.0), ScheduleError);
  CHECK_THROWS_AS(make_constant_schedule(1.0), ScheduleError);  // alpha_n = 1 excluded
  CHECK_THROWS_AS(make_constant_schedule(-0.3), ScheduleError);
}

TEST_CASE("harmonic schedule") {
  AlphaSchedule s = make_harmonic_schedule(2.0);
  CHECK(alpha_at(s, 0) == 0.5);
  CHECK(alpha_at(s, 8) == 0.1);
  CHECK(alpha_min(s, 9) == 0.1);  // smallest over n = 0..8
  CHECK_THROWS_AS(make_harmonic_schedule(1.0), ScheduleError);
  CHECK_THROWS_AS(make_harmonic_schedule(std::numeric_limits<double>::infinity()),
                  ScheduleError);
}

TEST_CASE("custom schedule cycles") {
  AlphaSchedule s = make_custom_schedule({0.5, 0.25});
  CHECK(alpha_at(s, 0) == 0.5);
  CHECK(alpha_at(s, 1) == 0.25);
  CHECK(alpha_at(s, 2) == 0.5);
  CHECK(alpha_min(s, 100) == 0.25);
  CHECK(alpha_partial_sum(s, 4) == 1.5);
  CHECK_THROWS_AS(make_custom_schedule({}), ScheduleError);
  CHECK_THROWS_AS(make_custom_schedule({0.5, 1.0}), ScheduleError);
}

TEST_CASE("vanishing custom schedules get flagged") {
  // sum over the budget stays below 10: hopeless for convergence
  CHECK(custom_schedule_suspicious(make_custom_schedule({1e-6}), 1000));
  CHECK_FALSE(custom_schedule_suspicious(make_custom_schedule({0.5}), 1000));
  // built-in families are never flagged
  CHECK_FALSE(custom_schedule_suspicious(make_constant_schedule(0.9), 5));
  CHECK_FALSE(custom_schedule_suspicious(make_harmonic_schedule(2.0), 5));
}
