#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigsim/config.hpp"
#include "sigsim/controllers.hpp"
#include "sigsim/scenario.hpp"

namespace sigsim {

enum class ControllerKind { fixed, pretimed, segmental, fuzzy, realtime, fuzzyreal };

const char* controller_name(ControllerKind kind);
std::optional<ControllerKind> controller_from_name(const std::string& name);

struct RunOptions {
  std::uint64_t seed = 0;        // 0 = use the scenario's master seed
  int segment_len_periods = 4;   // one hour with 15-minute periods
  bool record_series = true;
};

/// Drives one controller over the scenario, one decision per data-submission
/// period. Arrival streams depend only on (scenario, seed), so every
/// controller sees byte-identical traffic. Responsive controllers receive
/// the previous period's sensor frame and the current queue estimate; the
/// first period has no history and falls back to the even split.
RunReport run_controller(const IntersectionConfig& cfg, const Scenario& scenario,
                         ControllerKind kind, const RuleBase* rules,
                         const RunOptions& options = {});

/// All six strategies over one shared arrival stream, in fixed order
/// (fixed, pretimed, segmental, fuzzy, realtime, fuzzyreal).
std::vector<RunReport> run_all(const IntersectionConfig& cfg, const Scenario& scenario,
                               const RuleBase& rules, const RunOptions& options = {});

}  // namespace sigsim
