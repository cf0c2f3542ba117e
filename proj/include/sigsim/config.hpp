#pragma once

#include <stdexcept>
#include <string>

namespace sigsim {

/// One cycle's split: phase 1 (streets 1 & 3) gets green1_s, phase 2
/// (streets 2 & 4) gets green2_s, with a yellow interval after each phase.
struct PhasePlan {
  int green1_s = 56;
  int green2_s = 56;
  int yellow_s = 4;

  int cycle_s() const { return green1_s + green2_s + 2 * yellow_s; }

  bool operator==(const PhasePlan&) const = default;
};

/// Static geometry and signal constants of the four-approach intersection.
/// Defaults follow the reference setup: 120 s cycle, 4 s yellow, 15-minute
/// sensor data-submission period, entry sensors 150 m upstream.
struct IntersectionConfig {
  static constexpr int num_streets = 4;
  static constexpr int lanes_per_street = 3;
  static constexpr int num_phases = 2;
  static constexpr int tick_s = 1;  // engine tick; all delays are veh-seconds

  int cycle_s = 120;
  int yellow_s = 4;
  int sensor_gap_m = 150;           // entry sensor to stop line
  int vehicle_space_m = 6;          // queue space one stopped vehicle occupies
  int saturation_headway_ticks = 2; // ticks between departures per lane
  int period_s = 900;               // sensor data-submission period
  int capacity_per_period = 1350;   // veh per street per period (3 lanes * 0.5 veh/s * 900 s)
  int min_green_s = 5;              // search bounds on phase-1 green
  int max_green_s = 112;            // = cycle - 2*yellow with defaults

  /// Seconds of green available per cycle across both phases.
  int green_budget_s() const { return cycle_s - 2 * yellow_s; }

  double cycles_per_period() const {
    return static_cast<double>(period_s) / static_cast<double>(cycle_s);
  }

  /// Queue length (vehicles per lane) at which the queue reaches back to the
  /// entry sensor: 150 m / 6 m = 25 with defaults.
  int critical_queue_per_lane() const { return sensor_gap_m / vehicle_space_m; }
  int critical_queue_threshold() const {
    return lanes_per_street * critical_queue_per_lane();
  }

  /// The plan implied by a phase-1 green choice; phase 2 absorbs the rest.
  PhasePlan plan_for_green1(int green1) const {
    return PhasePlan{green1, cycle_s - 2 * yellow_s - green1, yellow_s};
  }

  void validate() const {
    if (cycle_s <= 0 || yellow_s < 0 || period_s <= 0)
      throw std::invalid_argument("config: cycle, yellow and period must be positive");
    if (capacity_per_period <= 0)
      throw std::invalid_argument("config: street capacity per period must be > 0");
    if (min_green_s < 1)
      throw std::invalid_argument("config: min_green must be >= 1");
    if (max_green_s < min_green_s)
      throw std::invalid_argument("config: min_green exceeds max_green");
    if (max_green_s > green_budget_s())
      throw std::invalid_argument("config: max_green leaves no room for yellow intervals");
    if (sensor_gap_m <= 0 || vehicle_space_m <= 0)
      throw std::invalid_argument("config: sensor gap and vehicle spacing must be > 0");
    if (saturation_headway_ticks < 1)
      throw std::invalid_argument("config: saturation headway must be >= 1 tick");
  }

  bool plan_feasible(const PhasePlan& p) const {
    return p.cycle_s() == cycle_s && p.yellow_s == yellow_s &&
           p.green1_s >= min_green_s && p.green1_s <= max_green_s &&
           p.green2_s >= 0;
  }
};

}  // namespace sigsim
