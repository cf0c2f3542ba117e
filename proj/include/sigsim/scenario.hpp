#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sigsim/config.hpp"
#include "sigsim/sim.hpp"

namespace sigsim {

/// A day's demand: per-street vehicles per 15-minute period plus per-street
/// turn fractions, with the master seed that pins every random draw.
struct Scenario {
  std::string name;
  int start_minute = 6 * 60;   // 06:00
  int end_minute = 22 * 60;    // 22:00
  int period_s = 900;
  std::array<std::vector<int>, IntersectionConfig::num_streets> flows;
  std::array<TurnFractions, IntersectionConfig::num_streets> turns{};
  std::uint64_t master_seed = 1;

  int num_periods() const { return (end_minute - start_minute) * 60 / period_s; }
  int horizon_ticks() const { return num_periods() * period_s; }

  std::array<double, IntersectionConfig::num_streets> daily_average_flows() const;
  /// Per-segment averages; the last segment may be shorter.
  std::vector<std::array<double, IntersectionConfig::num_streets>> segment_average_flows(
      int segment_len_periods) const;

  void validate() const;  // throws with a field diagnostic

  bool operator==(const Scenario&) const = default;
};

/// Parses the key=value scenario format (see data/abshar_synthetic.scn for a
/// documented example). Errors carry the offending line or field.
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical save; load_scenario(save_scenario(s)) == s.
void save_scenario(const Scenario& s, const std::filesystem::path& path);

/// Outcome of driving one controller over a scenario.
struct RunReport {
  std::string controller;
  long long total_delay = 0;  // veh-s
  std::array<long long, IntersectionConfig::num_streets> street_delay{};
  std::vector<long long> period_delay;
  int max_sqs = 0;
  std::vector<int> sqs_series;  // per tick
  long long candidates_evaluated = 0;
  long long vehicles_processed = 0;
  double wall_seconds = 0.0;  // console metadata; never written to files
};

/// 100 * (1 - delay / fixed_delay); 0 when the baseline saw no delay.
double improvement_pct(long long delay, long long fixed_delay);

/// Writes summary.csv (one row per controller with improvement vs the fixed
/// report when present), period_delay.csv, and sqs_series.csv
/// (`tick,controller,sqs`, tick-major, controller order as given).
void export_reports(const std::vector<RunReport>& reports,
                    const std::filesystem::path& out_dir);

}  // namespace sigsim
