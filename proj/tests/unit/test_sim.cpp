#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "sigsim/rng.hpp"
#include "sigsim/sim.hpp"

using namespace sigsim;

namespace {

IntersectionConfig default_cfg() { return IntersectionConfig{}; }

/// Independent per-vehicle bookkeeping: a vehicle waits from its entry tick
/// until it departs (or the horizon ends while it is still queued).
long long vehicle_waiting_sum(const Engine& eng, int horizon) {
  long long sum = 0;
  for (int si = 0; si < IntersectionConfig::num_streets; ++si)
    for (const auto& v : eng.vehicles(si)) {
      if (v.entry_tick >= horizon) continue;
      const int leave = v.exit_tick < 0 ? horizon : v.exit_tick;
      sum += leave - v.entry_tick;
    }
  return sum;
}

}  // namespace

TEST_CASE("generate_arrivals: zero flow gives an empty list") {
  CHECK(generate_arrivals(0, 0, 900, 1).empty());
}

TEST_CASE("generate_arrivals: exact count inside the period, sorted") {
  const auto ticks = generate_arrivals(30, 900, 900, 42);
  REQUIRE(ticks.size() == 30);
  CHECK(std::is_sorted(ticks.begin(), ticks.end()));
  for (int t : ticks) {
    CHECK(t >= 900);
    CHECK(t < 1800);
  }
}

TEST_CASE("generate_arrivals: identical seed, identical ticks") {
  CHECK(generate_arrivals(250, 0, 900, 7) == generate_arrivals(250, 0, 900, 7));
  CHECK(generate_arrivals(250, 0, 900, 7) != generate_arrivals(250, 0, 900, 8));
}

TEST_CASE("generate_arrivals: rejects invalid input") {
  CHECK_THROWS_AS(generate_arrivals(-1, 0, 900, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_arrivals(5, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("assign_intents: degenerate fractions") {
  std::array<TurnFractions, 4> turns{};
  auto stubs = make_stubs(0, std::vector<int>(50, 10), 0);

  SUBCASE("no turns means everyone goes straight") {
    const auto out = assign_intents(stubs, turns, 3);
    for (const auto& v : out) CHECK(v.intent == Intent::straight);
  }
  SUBCASE("all-left goes to the leftmost lane") {
    turns[0] = {100.0, 0.0};
    const auto out = assign_intents(stubs, turns, 3);
    for (const auto& v : out) {
      CHECK(v.intent == Intent::left);
      CHECK(v.lane == 0);
    }
  }
  SUBCASE("all-right goes to the rightmost lane") {
    turns[0] = {0.0, 100.0};
    const auto out = assign_intents(stubs, turns, 3);
    for (const auto& v : out) {
      CHECK(v.intent == Intent::right);
      CHECK(v.lane == 2);
    }
  }
}

TEST_CASE("assign_intents: empirical shares follow the fractions") {
  // law-of-large-numbers check against the sampler: 10k vehicles, 25/25/50
  std::array<TurnFractions, 4> turns{};
  turns[2] = {25.0, 25.0};
  auto stubs = make_stubs(2, std::vector<int>(10000, 0), 0);
  const auto out = assign_intents(std::move(stubs), turns, 99);
  int left = 0, right = 0, straight = 0;
  for (const auto& v : out) {
    if (v.intent == Intent::left) ++left;
    if (v.intent == Intent::right) ++right;
    if (v.intent == Intent::straight) ++straight;
  }
  CHECK(std::abs(left - 2500) <= 200);
  CHECK(std::abs(right - 2500) <= 200);
  CHECK(std::abs(straight - 5000) <= 200);
}

TEST_CASE("assign_intents: fractions above 100% are rejected") {
  std::array<TurnFractions, 4> turns{};
  turns[0] = {60.0, 50.0};
  CHECK_THROWS_AS(assign_intents({}, turns, 1), std::invalid_argument);
}

TEST_CASE("signal_for: phase windows over one cycle") {
  const PhasePlan plan{56, 56, 4};
  // streets 1 & 3 (indices 0, 2) hold phase 1
  CHECK(signal_for(plan, 0, 0) == Signal::green);
  CHECK(signal_for(plan, 0, 55) == Signal::green);
  CHECK(signal_for(plan, 0, 56) == Signal::yellow);
  CHECK(signal_for(plan, 0, 59) == Signal::yellow);
  CHECK(signal_for(plan, 0, 60) == Signal::red);
  CHECK(signal_for(plan, 0, 119) == Signal::red);
  CHECK(signal_for(plan, 1, 0) == Signal::red);
  CHECK(signal_for(plan, 1, 59) == Signal::red);
  CHECK(signal_for(plan, 1, 60) == Signal::green);
  CHECK(signal_for(plan, 1, 115) == Signal::green);
  CHECK(signal_for(plan, 1, 116) == Signal::yellow);
  CHECK(signal_for(plan, 1, 119) == Signal::yellow);
  CHECK(signal_for(plan, 2, 10) == Signal::green);
  CHECK(signal_for(plan, 3, 10) == Signal::red);
}

TEST_CASE("engine: red holds the queue and accrues its delay") {
  Engine eng(default_cfg(), true);
  eng.seed_queue(1, 0, 2);
  eng.seed_queue(1, 1, 2);
  eng.seed_queue(1, 2, 1);
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.step();  // street 2 is red during phase-1 green
  CHECK(eng.street(1).queue_len == 5);
  CHECK(eng.street(1).delay_veh_s == 5);
  CHECK(eng.street(1).exited_total == 0);
}

TEST_CASE("engine: saturation discharge, 3 straight lanes, 10 s green") {
  // hand simulation: headway 2 -> each lane departs on ticks 0,2,4,6,8
  Engine eng(default_cfg(), false);
  for (int lane = 0; lane < 3; ++lane) eng.seed_queue(0, lane, 10);
  eng.append_plan(PhasePlan{10, 102, 4});
  eng.run_to(10);
  CHECK(eng.street(0).exited_total == 15);
  CHECK(eng.street(0).queue_len == 15);
}

TEST_CASE("engine: empty green street does nothing") {
  Engine eng(default_cfg(), false);
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.run_to(10);
  CHECK(eng.street(0).exited_total == 0);
  CHECK(eng.street(0).delay_veh_s == 0);
}

TEST_CASE("engine: same-tick arrival can depart with zero wait") {
  Engine eng(default_cfg(), false);
  VehicleRecord v;
  v.street = 0;
  v.entry_tick = 0;
  v.lane = -1;
  eng.add_vehicles(0, {v});
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.step();
  CHECK(eng.street(0).exited_total == 1);
  CHECK(eng.vehicles(0)[0].exit_tick == 0);
}

TEST_CASE("engine: right turn yields one slot to the right turn on its left") {
  Engine eng(default_cfg(), false);
  eng.seed_queue(0, 1, 1, Intent::right);
  eng.seed_queue(0, 2, 1, Intent::right);
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.step();
  // lane 2's head waits for the lane-1 right turn
  CHECK(eng.street(0).exited_total == 1);
  CHECK(eng.vehicles(0)[0].exit_tick == 0);
  CHECK(eng.vehicles(0)[1].exit_tick == -1);
  eng.step();
  CHECK(eng.vehicles(0)[1].exit_tick == 1);
}

TEST_CASE("engine: left turn waits for the lane on its left") {
  Engine eng(default_cfg(), false);
  eng.seed_queue(0, 0, 1, Intent::straight);
  eng.seed_queue(0, 1, 1, Intent::left);
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.step();
  CHECK(eng.vehicles(0)[0].exit_tick == 0);   // straight goes
  CHECK(eng.vehicles(0)[1].exit_tick == -1);  // left blocked by the straight head
  eng.step();
  CHECK(eng.vehicles(0)[1].exit_tick == 1);  // lane 0 now empty
}

TEST_CASE("engine: adjacent left turns depart together") {
  Engine eng(default_cfg(), false);
  eng.seed_queue(0, 0, 1, Intent::left);
  eng.seed_queue(0, 1, 1, Intent::left);
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.step();
  CHECK(eng.street(0).exited_total == 2);
}

TEST_CASE("engine: leftmost lane left turn is never blocked") {
  Engine eng(default_cfg(), false);
  eng.seed_queue(0, 0, 1, Intent::left);
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.step();
  CHECK(eng.street(0).exited_total == 1);
}

TEST_CASE("engine: critical flag tracks the sensor-gap threshold") {
  auto cfg = default_cfg();
  REQUIRE(cfg.critical_queue_threshold() == 75);  // 3 lanes * 150 m / 6 m

  Engine at(cfg, false);
  for (int lane = 0; lane < 3; ++lane) at.seed_queue(1, lane, 25);
  at.append_plan(PhasePlan{56, 56, 4});
  at.step();
  CHECK_FALSE(at.street(1).critical);  // exactly at the threshold, not past it

  Engine past(cfg, false);
  for (int lane = 0; lane < 3; ++lane) past.seed_queue(1, lane, 25);
  past.seed_queue(1, 0, 1);
  past.append_plan(PhasePlan{56, 56, 4});
  past.step();
  CHECK(past.street(1).critical);
  CHECK(past.street(1).critical_ticks == 1);
}

TEST_CASE("run_horizon: zero arrivals give an all-zero result") {
  std::array<std::vector<VehicleRecord>, 4> none{};
  const auto r = run_horizon(default_cfg(), none, {0, 0, 0, 0},
                             std::vector<PhasePlan>(8, PhasePlan{56, 56, 4}), 900);
  CHECK(r.total_delay == 0);
  CHECK(r.max_sqs == 0);
  CHECK(r.vehicles_processed == 0);
  for (int t : r.sqs_series) CHECK(t == 0);
}

TEST_CASE("run_horizon: held queue contributes its area") {
  // 5 vehicles on a red street for 10 ticks = 50 veh-s
  std::array<std::vector<VehicleRecord>, 4> none{};
  const auto r = run_horizon(default_cfg(), none, {0, 5, 0, 0},
                             std::vector<PhasePlan>(1, PhasePlan{56, 56, 4}), 10);
  CHECK(r.delay_per_street[1] == 50);
  CHECK(r.total_delay == 50);
}

TEST_CASE("run_horizon: rejects a plan schedule shorter than the horizon") {
  std::array<std::vector<VehicleRecord>, 4> none{};
  CHECK_THROWS_AS(run_horizon(default_cfg(), none, {0, 0, 0, 0},
                              std::vector<PhasePlan>(2, PhasePlan{56, 56, 4}), 900),
                  std::invalid_argument);
}

TEST_CASE("engine: conservation and the per-vehicle delay identity") {
  // seeded random day slice; the area under the queue curve must equal the
  // independent per-vehicle waiting sum, and flows must balance every tick
  const auto cfg = default_cfg();
  std::array<TurnFractions, 4> turns{{{10, 20}, {15, 10}, {5, 25}, {0, 0}}};
  Engine eng(cfg, true);
  for (int si = 0; si < 4; ++si) {
    const auto ticks = generate_arrivals(400 + 50 * si, 0, 1800, derive_seed(11, si));
    eng.add_vehicles(si, assign_intents(make_stubs(si, ticks, 0), turns, derive_seed(12, si)));
  }
  eng.append_plan(PhasePlan{40, 72, 4}, 8);
  eng.append_plan(PhasePlan{70, 42, 4}, 7);
  const int horizon = 1800;
  for (int t = 0; t < horizon; ++t) {
    eng.step();
    for (int si = 0; si < 4; ++si) {
      const auto& c = eng.street(si);
      REQUIRE(c.entered_total == c.exited_total + c.queue_len);
      REQUIRE(c.queue_len >= 0);
    }
  }
  CHECK(eng.conservation_violations() == 0);

  const auto r = eng.result();
  CHECK(r.total_delay == vehicle_waiting_sum(eng, horizon));
  // the recorded series is consistent with the totals
  long long area = 0;
  for (int si = 0; si < 4; ++si)
    area += std::accumulate(r.queue_series[si].begin(), r.queue_series[si].end(), 0LL);
  CHECK(area == r.total_delay);
  for (std::size_t t = 0; t < r.sqs_series.size(); ++t) {
    int sum = 0;
    for (int si = 0; si < 4; ++si) sum += r.queue_series[si][t];
    REQUIRE(sum == r.sqs_series[t]);
  }
}

TEST_CASE("engine: identical inputs give identical results") {
  auto once = [] {
    Engine eng(default_cfg(), true);
    std::array<TurnFractions, 4> turns{{{10, 10}, {10, 10}, {10, 10}, {10, 10}}};
    for (int si = 0; si < 4; ++si) {
      const auto ticks = generate_arrivals(300, 0, 900, derive_seed(5, si));
      eng.add_vehicles(si, assign_intents(make_stubs(si, ticks, 0), turns, derive_seed(6, si)));
    }
    eng.append_plan(PhasePlan{50, 62, 4}, 8);
    eng.run_to(900);
    return eng.result();
  };
  const auto a = once();
  const auto b = once();
  CHECK(a.total_delay == b.total_delay);
  CHECK(a.sqs_series == b.sqs_series);
  CHECK(a.queue_series == b.queue_series);
  CHECK(a.delay_per_street == b.delay_per_street);
}

TEST_CASE("engine: period counters reset, totals do not") {
  Engine eng(default_cfg(), false);
  VehicleRecord v;
  v.street = 0;
  v.entry_tick = 0;
  eng.add_vehicles(0, {v});
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.step();
  CHECK(eng.street(0).entered_period == 1);
  eng.begin_period();
  CHECK(eng.street(0).entered_period == 0);
  CHECK(eng.street(0).entered_total == 1);
}

TEST_CASE("density: direct arithmetic and clamping") {
  const auto cfg = default_cfg();
  CHECK(street_density(0, 0, cfg) == 0.0);
  CHECK(occupancy_ratio(10, 60, 900, 7.5) == doctest::Approx(0.15).epsilon(1e-12));
  // a street at capacity with no queue sits at the top of the scale
  CHECK(street_density(0, cfg.capacity_per_period, cfg) == 3.0);
  CHECK(street_density(1000, cfg.capacity_per_period, cfg) == 3.0);
  CHECK_THROWS_AS(occupancy_ratio(1, 1, 0, 7.5), std::invalid_argument);
}

TEST_CASE("engine: plan schedule exhaustion throws") {
  Engine eng(default_cfg(), false);
  eng.append_plan(PhasePlan{56, 56, 4});
  eng.run_to(120);
  CHECK_THROWS_AS(eng.step(), std::runtime_error);
}
