#include <catch2/catch_amalgamated.hpp>

#include "swflow/switching.hpp"

using namespace swflow;

namespace {
SwitchingSignal make_signal(std::vector<std::pair<double, int>> events, double horizon) {
  SwitchingSignal s;
  s.events = std::move(events);
  s.horizon = horizon;
  return s;
}
}  // namespace

TEST_CASE("validate_adt on hand-checked schedules") {
  // no switches: valid for any params
  auto quiet = make_signal({{0.0, 1}}, 10.0);
  CHECK(validate_adt(quiet, {0.01, 1}).valid);

  // N0=1, tau_d=1, switches at 1, 2, 3: every window (s, t) has
  // N <= 1 + (t - s); enumerating pairs confirms validity
  auto even = make_signal({{0.0, 1}, {1.0, 2}, {2.0, 1}, {3.0, 2}}, 4.0);
  auto rep = validate_adt(even, {1.0, 1});
  CHECK(rep.valid);

  // N0=1, tau_d=10, switches at 1.0 and 1.5: the window around both switches
  // holds 2 > 1 + 0.5/10
  auto burst = make_signal({{0.0, 1}, {1.0, 2}, {1.5, 1}}, 4.0);
  rep = validate_adt(burst, {10.0, 1});
  CHECK_FALSE(rep.valid);
  CHECK(rep.worst_window.first == Catch::Approx(1.0));
  CHECK(rep.worst_window.second == Catch::Approx(1.5));
  CHECK(rep.worst_excess == Catch::Approx(2.0 - (1.0 + 0.5 / 10.0)));
}

TEST_CASE("generate_signal basic behavior") {
  // rate = 0 with an empty budget: the timer never reaches 1
  auto frozen = generate_signal({1.0, 1}, 3, 50.0, 1, 0.0, 1.0, 0.0);
  CHECK(frozen.events.size() == 1);

  // rate out of range
  CHECK_THROWS_AS(generate_signal({1.0, 1}, 2, 1.0, 1, 1.5), InvalidRate);

  // rate = 1, N0 = 1, tau(0) = 0: the timer must regrow from 0 to 1 between
  // switches, so gaps are at least tau_d
  auto slow = generate_signal({2.0, 1}, 2, 200.0, 7, 1.0, 1.0, 0.0);
  auto sw = slow.switch_times();
  REQUIRE(sw.size() > 3);
  for (std::size_t i = 1; i < sw.size(); ++i) CHECK(sw[i] - sw[i - 1] >= 2.0 - 1e-12);
}

TEST_CASE("generate_signal output always satisfies its own dwell constraint") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    DwellTimeParams params{0.5 + 0.05 * static_cast<double>(seed % 7), 1 + static_cast<int>(seed % 3)};
    const double rate = (seed % 11) / 10.0;
    auto signal = generate_signal(params, 2 + static_cast<int>(seed % 3), 30.0, seed, rate, 0.7);
    auto rep = validate_adt(signal, params);
    INFO("seed " << seed << " excess " << rep.worst_excess);
    CHECK(rep.valid);
  }
}

TEST_CASE("jump budget reconstruction stays within [0, N0]") {
  DwellTimeParams params{1.0, 2};
  auto signal = generate_signal(params, 3, 40.0, 99, 0.9, 0.6);
  double tau = signal.tau0;
  double prev = 0.0;
  for (double t : signal.switch_times()) {
    tau = std::min(static_cast<double>(params.N0), tau + signal.timer_rate * (t - prev) / params.tau_d);
    CHECK(tau >= 1.0 - 1e-9);
    tau -= 1.0;
    CHECK(tau >= -1e-12);
    CHECK(tau <= params.N0);
    prev = t;
  }
}

TEST_CASE("mode_at is right-continuous") {
  auto signal = make_signal({{0.0, 1}}, 10.0);
  CHECK(mode_at(signal, 5.0) == 1);

  auto two = make_signal({{0.0, 1}, {2.0, 2}}, 10.0);
  CHECK(mode_at(two, 2.0) == 2);
  CHECK(mode_at(two, 1.999) == 1);
  CHECK(mode_at(two, 0.0) == 1);
  CHECK_THROWS_AS(mode_at(two, 10.5), OutOfHorizon);
  CHECK_THROWS_AS(mode_at(two, -0.1), OutOfHorizon);
}

TEST_CASE("generated switches land on modes in range and differ from predecessor") {
  auto signal = generate_signal({0.8, 2}, 4, 60.0, 1234, 1.0, 0.8);
  for (std::size_t i = 1; i < signal.events.size(); ++i) {
    CHECK(signal.events[i].second >= 1);
    CHECK(signal.events[i].second <= 4);
    CHECK(signal.events[i].second != signal.events[i - 1].second);
  }
}
