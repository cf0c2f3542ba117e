#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "sigsim/config.hpp"

namespace sigsim {

/// Density quantization levels: midpoints of the five [0,3] intervals
/// [0.0-0.6], (0.6-1.2], (1.2-1.8], (1.8-2.4], (2.4-3.0].
inline constexpr std::array<double, 5> kDensityLevels = {0.3, 0.9, 1.5, 2.1, 2.7};
inline constexpr int kNumLevels = 5;
inline constexpr int kNumRules = 625;  // 5^4 level tuples

/// Per-street membership over the five levels. Triangular functions centered
/// on the level values with base width 1.2, shouldered at both ends, so at
/// most two weights are nonzero and they sum to 1.
struct LevelMembership {
  std::array<double, kNumLevels> w{};
};

LevelMembership fuzzify(double density);

/// Flat index of a level tuple, lexicographic in (d1, d2, d3, d4).
int rule_index(const std::array<int, 4>& level_idx);
std::array<int, 4> rule_levels(int index);

/// The 625-entry map from a 4-street density-level tuple to a phase-1 green.
/// Entries may be partially present (e.g. a test fixture); lookups on missing
/// entries fail, and controllers require a complete base.
class RuleBase {
 public:
  struct Metadata {
    std::uint64_t build_seed = 0;
    int repetitions = 0;
    std::string builder = "";
  };

  void set(const std::array<int, 4>& levels, int green_s);
  std::optional<int> get(const std::array<int, 4>& levels) const;
  bool complete() const { return count_ == kNumRules; }
  int size() const { return count_; }

  Metadata& metadata() { return meta_; }
  const Metadata& metadata() const { return meta_; }

  /// CSV with header `d1,d2,d3,d4,green`, densities printed with one decimal,
  /// rows lexicographic by level tuple. Exactly the stored entries, no more.
  void save_csv(const std::filesystem::path& path) const;
  static RuleBase load_csv(const std::filesystem::path& path);

 private:
  std::array<int, kNumRules> green_{};
  std::array<bool, kNumRules> present_{};
  int count_ = 0;
  Metadata meta_;
};

/// Fires every rule whose level tuple has nonzero membership product
/// (at most 16), defuzzifies by the membership-weighted average of their
/// green times, rounds to whole seconds and clamps to the green bounds.
/// Throws if a needed rule is missing from the base.
int infer_green(const std::array<double, 4>& densities, const RuleBase& rules,
                const IntersectionConfig& cfg);

struct RuleBuildStats {
  std::array<int, 4> levels{};
  int stored_green = 0;
  int modal_green = 0;
  double within_2s_of_mode = 0.0;  // share of repetitions
  int min_green = 0;
  int max_green = 0;
};

/// Optimal green for one level tuple: runs the exhaustive search over
/// `repetitions` independently seeded demand realizations (demand per street
/// = level/3 of capacity, empty initial queues) and returns the
/// frequency-weighted average of the per-repetition optima, rounded.
int build_rule_for_state(const IntersectionConfig& cfg, const std::array<int, 4>& levels,
                         int repetitions, std::uint64_t state_seed,
                         RuleBuildStats* stats = nullptr);

/// Builds all 625 entries. Each state derives its own seed from
/// (base_seed, state index), so the result is independent of threading.
RuleBase build_rulebase(const IntersectionConfig& cfg, int repetitions,
                        std::uint64_t base_seed, int threads = 1,
                        std::vector<RuleBuildStats>* stats = nullptr,
                        const std::function<void(int done, int total)>& progress = {});

}  // namespace sigsim
