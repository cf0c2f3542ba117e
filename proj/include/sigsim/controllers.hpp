#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sigsim/config.hpp"
#include "sigsim/fuzzy.hpp"
#include "sigsim/sim.hpp"

namespace sigsim {

/// Aggregate sensor counts for one data-submission period.
struct SensorFrame {
  int period_index = 0;
  std::array<int, IntersectionConfig::num_streets> entered{};  // upstream sensor
  std::array<int, IntersectionConfig::num_streets> exited{};   // stop-line sensor
};

struct QueueEstimate {
  std::array<int, IntersectionConfig::num_streets> queue{};
  bool sensor_inconsistency = false;  // some raw estimate was negative
};

/// Vehicles held between the two sensors: cumulative entered minus exited
/// over the submitted history, clamped at zero per street.
QueueEstimate estimate_queue(
    const std::array<std::vector<int>, IntersectionConfig::num_streets>& entered_history,
    const std::array<std::vector<int>, IntersectionConfig::num_streets>& exited_history);

/// One timing decision covering the cycles that start in the coming period.
struct ControllerDecision {
  std::vector<PhasePlan> plans;      // one per cycle
  long long predicted_delay = 0;     // veh-s under the prediction model; 0 if unsearched
  int candidates_evaluated = 1;
};

/// The world the optimizing controllers score candidate splits against:
/// arrivals regenerated from the frame's entered counts on the same
/// mid-peaked profile the arrival generator uses (one fixed realization
/// shared by every candidate) on top of the sensed initial queues. Intents
/// are all-straight; detectors see only existence.
struct PredictionInstance {
  std::array<std::vector<VehicleRecord>, IntersectionConfig::num_streets> vehicles;
  std::array<int, IntersectionConfig::num_streets> initial_queue{};
};

PredictionInstance make_prediction_instance(const IntersectionConfig& cfg,
                                            const SensorFrame& frame,
                                            const std::array<int, 4>& queue_start,
                                            std::uint64_t seed);

/// The same world with streets relabeled one position down, so the phase
/// pairs swap roles. Candidates are scored over both anchors; a horizon that
/// always started on a phase-1 green would systematically favor phase 1,
/// while in the running intersection plans engage mid-cycle as often as not.
PredictionInstance rotate_prediction_instance(const PredictionInstance& instance);

/// Cycles governed by one period decision (the straddling cycle included).
int prediction_cycles(const IntersectionConfig& cfg);
/// Scoring horizon: every governed cycle in full. Ending the horizon mid-cycle
/// would deny phase 2 its last green and bias the search toward phase 1.
int prediction_horizon_ticks(const IntersectionConfig& cfg);

/// Total delay over the prediction horizon under `plan`, starting from the
/// instance's queues and arrivals.
long long predicted_delay(const IntersectionConfig& cfg, const PhasePlan& plan,
                          const PredictionInstance& instance);

/// The score a candidate phase-1 green is ranked by: delay under the plan on
/// the instance plus delay under the mirrored plan on the rotated instance.
long long candidate_score(const IntersectionConfig& cfg, int green1,
                          const PredictionInstance& instance,
                          const PredictionInstance& rotated);

/// Constant even split, insensitive to any input.
ControllerDecision fixed_time(const IntersectionConfig& cfg, int num_cycles = 1);

/// Static split proportional to whole-day average phase demand.
/// Falls back to the even split when all flows are zero.
ControllerDecision pretimed(const IntersectionConfig& cfg,
                            const std::array<double, 4>& daily_average_flows,
                            int num_cycles = 1);

/// The pretimed proportional rule applied per time segment.
std::vector<ControllerDecision> segmental_pretimed(
    const IntersectionConfig& cfg,
    const std::vector<std::array<double, 4>>& segment_average_flows, int num_cycles = 1);

/// Exhaustive search: scores every phase-1 green in [min_green, max_green]
/// (1 s step) against the prediction instance and returns the argmin,
/// ties broken toward the smaller green.
ControllerDecision realtime_optimize(const IntersectionConfig& cfg, const SensorFrame& frame,
                                     const std::array<int, 4>& queue_start,
                                     std::uint64_t seed, int num_cycles = 1);

/// Pure fuzzy control: densities -> rule-base inference, no search.
ControllerDecision fuzzy_control(const IntersectionConfig& cfg, const SensorFrame& frame,
                                 const std::array<int, 4>& queue_start,
                                 const RuleBase& rules, int num_cycles = 1);

/// Hybrid: fuzzy inference seeds the search, which then scores only the
/// 11-candidate window within 5 s of the seed (clipped at the bounds).
ControllerDecision fuzzyreal_optimize(const IntersectionConfig& cfg, const SensorFrame& frame,
                                      const std::array<int, 4>& queue_start,
                                      const RuleBase& rules, std::uint64_t seed,
                                      int num_cycles = 1);

}  // namespace sigsim
