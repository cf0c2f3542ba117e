#include <doctest.h>

#include <numeric>

#include "sigsim/harness.hpp"

using namespace sigsim;

namespace {

Scenario small_scenario(int periods, int major_flow, int minor_flow) {
  Scenario s;
  s.name = "unit";
  s.start_minute = 0;
  s.end_minute = periods * 15;
  s.period_s = 900;
  s.master_seed = 321;
  for (int si = 0; si < 4; ++si)
    s.flows[si].assign(periods, si % 2 == 0 ? major_flow : minor_flow);
  s.turns = {{{10, 15}, {10, 15}, {10, 15}, {10, 15}}};
  return s;
}

RuleBase constant_rulebase(int green) {
  RuleBase rb;
  for (int idx = 0; idx < kNumRules; ++idx) rb.set(rule_levels(idx), green);
  return rb;
}

}  // namespace

TEST_CASE("run_controller: zero demand, zero delay, for every strategy") {
  const IntersectionConfig cfg;
  const auto s = small_scenario(4, 0, 0);
  const auto rb = constant_rulebase(56);
  for (auto kind : {ControllerKind::fixed, ControllerKind::pretimed, ControllerKind::segmental,
                    ControllerKind::fuzzy, ControllerKind::realtime, ControllerKind::fuzzyreal}) {
    const auto r = run_controller(cfg, s, kind, &rb);
    CHECK(r.total_delay == 0);
    CHECK(r.max_sqs == 0);
    CHECK(r.vehicles_processed == 0);
  }
}

TEST_CASE("run_controller: period accounting adds up") {
  const IntersectionConfig cfg;
  const auto s = small_scenario(4, 400, 150);
  const auto r = run_controller(cfg, s, ControllerKind::fixed, nullptr);
  REQUIRE(r.period_delay.size() == 4);
  CHECK(std::accumulate(r.period_delay.begin(), r.period_delay.end(), 0LL) == r.total_delay);
  CHECK(r.total_delay ==
        r.street_delay[0] + r.street_delay[1] + r.street_delay[2] + r.street_delay[3]);
  CHECK(static_cast<int>(r.sqs_series.size()) == s.horizon_ticks());
  CHECK(r.max_sqs == *std::max_element(r.sqs_series.begin(), r.sqs_series.end()));
}

TEST_CASE("run_controller: candidate accounting per strategy") {
  const IntersectionConfig cfg;
  const auto s = small_scenario(4, 300, 200);
  const auto rb = constant_rulebase(50);

  CHECK(run_controller(cfg, s, ControllerKind::fixed, nullptr).candidates_evaluated == 4);
  CHECK(run_controller(cfg, s, ControllerKind::fuzzy, &rb).candidates_evaluated == 4);
  // first period has no sensor history: 1 candidate, then the full range
  CHECK(run_controller(cfg, s, ControllerKind::realtime, nullptr).candidates_evaluated ==
        1 + 3 * (cfg.max_green_s - cfg.min_green_s + 1));
  CHECK(run_controller(cfg, s, ControllerKind::fuzzyreal, &rb).candidates_evaluated <=
        1 + 3 * 11);
}

TEST_CASE("run_controller: the fuzzy family demands a complete rule base") {
  const IntersectionConfig cfg;
  const auto s = small_scenario(2, 100, 100);
  CHECK_THROWS_WITH_AS(run_controller(cfg, s, ControllerKind::fuzzy, nullptr),
                       doctest::Contains("build-rulebase"), std::invalid_argument);
  RuleBase partial;
  partial.set({0, 0, 0, 0}, 56);
  CHECK_THROWS_AS(run_controller(cfg, s, ControllerKind::fuzzyreal, &partial),
                  std::invalid_argument);
}

TEST_CASE("run_controller: deterministic across invocations") {
  const IntersectionConfig cfg;
  const auto s = small_scenario(3, 350, 180);
  const auto a = run_controller(cfg, s, ControllerKind::realtime, nullptr);
  const auto b = run_controller(cfg, s, ControllerKind::realtime, nullptr);
  CHECK(a.total_delay == b.total_delay);
  CHECK(a.sqs_series == b.sqs_series);
  CHECK(a.period_delay == b.period_delay);

  const auto c = run_controller(cfg, s, ControllerKind::realtime, nullptr, {.seed = 999});
  CHECK(c.total_delay != a.total_delay);  // different stream
}

TEST_CASE("run_all: six reports in canonical order over one shared stream") {
  const IntersectionConfig cfg;
  const auto s = small_scenario(3, 380, 160);
  const auto rb = constant_rulebase(56);
  const auto reports = run_all(cfg, s, rb);
  REQUIRE(reports.size() == 6);
  CHECK(reports[0].controller == "fixed");
  CHECK(reports[1].controller == "pretimed");
  CHECK(reports[2].controller == "segmental");
  CHECK(reports[3].controller == "fuzzy");
  CHECK(reports[4].controller == "realtime");
  CHECK(reports[5].controller == "fuzzyreal");
  // same day, same vehicles: total entered is identical for everyone
  long long expected = 0;
  for (const auto& f : s.flows) expected += std::accumulate(f.begin(), f.end(), 0LL);
  for (const auto& r : reports) {
    const long long still_queued = r.sqs_series.back();
    CHECK(r.vehicles_processed + still_queued == expected);
  }
}

TEST_CASE("controller names round-trip") {
  for (auto kind : {ControllerKind::fixed, ControllerKind::pretimed, ControllerKind::segmental,
                    ControllerKind::fuzzy, ControllerKind::realtime, ControllerKind::fuzzyreal})
    CHECK(controller_from_name(controller_name(kind)) == kind);
  CHECK_FALSE(controller_from_name("webster").has_value());
}
