#include "sigsim/harness.hpp"

#include <chrono>
#include <stdexcept>

#include "sigsim/rng.hpp"

namespace sigsim {

const char* controller_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::fixed: return "fixed";
    case ControllerKind::pretimed: return "pretimed";
    case ControllerKind::segmental: return "segmental";
    case ControllerKind::fuzzy: return "fuzzy";
    case ControllerKind::realtime: return "realtime";
    case ControllerKind::fuzzyreal: return "fuzzyreal";
  }
  return "?";
}

std::optional<ControllerKind> controller_from_name(const std::string& name) {
  for (auto k : {ControllerKind::fixed, ControllerKind::pretimed, ControllerKind::segmental,
                 ControllerKind::fuzzy, ControllerKind::realtime, ControllerKind::fuzzyreal})
    if (name == controller_name(k)) return k;
  return std::nullopt;
}

namespace {

/// Cycles that start inside period k (the straddling cycle keeps the plan of
/// the period it started in).
int cycles_starting_in_period(const IntersectionConfig& cfg, int period) {
  const long long t0 = static_cast<long long>(period) * cfg.period_s;
  const long long t1 = t0 + cfg.period_s;
  const long long first = (t0 + cfg.cycle_s - 1) / cfg.cycle_s;  // ceil
  const long long past = (t1 + cfg.cycle_s - 1) / cfg.cycle_s;
  return static_cast<int>(past - first);
}

ControllerDecision decision_repeat(const ControllerDecision& d, int num_cycles) {
  ControllerDecision out = d;
  out.plans.assign(static_cast<std::size_t>(num_cycles), d.plans.front());
  return out;
}

}  // namespace

RunReport run_controller(const IntersectionConfig& cfg, const Scenario& scenario,
                         ControllerKind kind, const RuleBase* rules,
                         const RunOptions& options) {
  cfg.validate();
  scenario.validate();
  const bool needs_rules = kind == ControllerKind::fuzzy || kind == ControllerKind::fuzzyreal;
  if (needs_rules && (rules == nullptr || !rules->complete()))
    throw std::invalid_argument(std::string(controller_name(kind)) +
                                " needs a complete 625-entry rule base; generate one with "
                                "the build-rulebase command");

  const auto start_time = std::chrono::steady_clock::now();
  const std::uint64_t seed = options.seed ? options.seed : scenario.master_seed;
  const int periods = scenario.num_periods();

  // Traffic is a function of (scenario, seed) only: identical for every
  // controller compared on this scenario.
  Engine engine(cfg, options.record_series);
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    std::int32_t next_id = 0;
    for (int k = 0; k < periods; ++k) {
      const int flow = scenario.flows[static_cast<std::size_t>(si)][static_cast<std::size_t>(k)];
      const auto ticks = generate_arrivals(flow, k * scenario.period_s, scenario.period_s,
                                           derive_seed(seed, 0xA221u * static_cast<std::uint64_t>(si + 1),
                                                       static_cast<std::uint64_t>(k)));
      auto stubs = make_stubs(si, ticks, next_id);
      next_id += static_cast<std::int32_t>(stubs.size());
      engine.add_vehicles(si, assign_intents(std::move(stubs), scenario.turns,
                                             derive_seed(seed, 0x1A7E5u * static_cast<std::uint64_t>(si + 1),
                                                         static_cast<std::uint64_t>(k))));
    }
  }

  // Static strategies plan from scenario demand profiles, not sensors.
  const ControllerDecision pretimed_decision = pretimed(cfg, scenario.daily_average_flows(), 1);
  std::vector<ControllerDecision> segment_decisions;
  if (kind == ControllerKind::segmental)
    segment_decisions =
        segmental_pretimed(cfg, scenario.segment_average_flows(options.segment_len_periods), 1);

  RunReport report;
  report.controller = controller_name(kind);

  std::array<std::vector<int>, IntersectionConfig::num_streets> entered_history;
  std::array<std::vector<int>, IntersectionConfig::num_streets> exited_history;

  long long delay_so_far = 0;
  for (int k = 0; k < periods; ++k) {
    SensorFrame frame;
    frame.period_index = k;
    if (k > 0)
      for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
        frame.entered[static_cast<std::size_t>(si)] = entered_history[static_cast<std::size_t>(si)].back();
        frame.exited[static_cast<std::size_t>(si)] = exited_history[static_cast<std::size_t>(si)].back();
      }
    const QueueEstimate qe = estimate_queue(entered_history, exited_history);

    const int nc = cycles_starting_in_period(cfg, k);
    ControllerDecision decision;
    const std::uint64_t inner_seed = derive_seed(seed, 0x0C7Au, static_cast<std::uint64_t>(k));
    switch (kind) {
      case ControllerKind::fixed:
        decision = fixed_time(cfg, nc);
        break;
      case ControllerKind::pretimed:
        decision = decision_repeat(pretimed_decision, nc);
        break;
      case ControllerKind::segmental:
        decision = decision_repeat(
            segment_decisions[static_cast<std::size_t>(k / options.segment_len_periods)], nc);
        break;
      case ControllerKind::fuzzy:
        decision = k == 0 ? fixed_time(cfg, nc) : fuzzy_control(cfg, frame, qe.queue, *rules, nc);
        break;
      case ControllerKind::realtime:
        decision = k == 0 ? fixed_time(cfg, nc)
                          : realtime_optimize(cfg, frame, qe.queue, inner_seed, nc);
        break;
      case ControllerKind::fuzzyreal:
        decision = k == 0 ? fixed_time(cfg, nc)
                          : fuzzyreal_optimize(cfg, frame, qe.queue, *rules, inner_seed, nc);
        break;
    }
    report.candidates_evaluated += decision.candidates_evaluated;
    for (const auto& p : decision.plans) engine.append_plan(p);

    engine.run_to((k + 1) * scenario.period_s);

    for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
      entered_history[static_cast<std::size_t>(si)].push_back(engine.street(si).entered_period);
      exited_history[static_cast<std::size_t>(si)].push_back(engine.street(si).exited_period);
    }
    engine.begin_period();
    const long long total = engine.total_delay();
    report.period_delay.push_back(total - delay_so_far);
    delay_so_far = total;
  }

  SimResult result = engine.result();
  report.total_delay = result.total_delay;
  report.street_delay = result.delay_per_street;
  report.max_sqs = result.max_sqs;
  report.sqs_series = std::move(result.sqs_series);
  report.vehicles_processed = result.vehicles_processed;
  if (engine.conservation_violations() != 0)
    throw std::logic_error("run_controller: conservation check failed");

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return report;
}

std::vector<RunReport> run_all(const IntersectionConfig& cfg, const Scenario& scenario,
                               const RuleBase& rules, const RunOptions& options) {
  std::vector<RunReport> reports;
  for (auto k : {ControllerKind::fixed, ControllerKind::pretimed, ControllerKind::segmental,
                 ControllerKind::fuzzy, ControllerKind::realtime, ControllerKind::fuzzyreal})
    reports.push_back(run_controller(cfg, scenario, k, &rules, options));
  return reports;
}

}  // namespace sigsim
