#include "sigsim/fuzzy.hpp"

#include <atomic>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sigsim/controllers.hpp"
#include "sigsim/rng.hpp"

namespace sigsim {

namespace {
constexpr double kLevelSpacing = 0.6;  // also half the triangular base width

int nearest_level(double value) {
  for (int i = 0; i < kNumLevels; ++i)
    if (std::abs(value - kDensityLevels[static_cast<std::size_t>(i)]) < 1e-9) return i;
  return -1;
}
}  // namespace

LevelMembership fuzzify(double density) {
  const double d = std::clamp(density, 0.0, 3.0);
  LevelMembership m;
  if (d <= kDensityLevels.front()) {
    m.w[0] = 1.0;  // left shoulder
    return m;
  }
  if (d >= kDensityLevels.back()) {
    m.w[kNumLevels - 1] = 1.0;  // right shoulder
    return m;
  }
  for (int i = 0; i + 1 < kNumLevels; ++i) {
    const double lo = kDensityLevels[static_cast<std::size_t>(i)];
    const double hi = kDensityLevels[static_cast<std::size_t>(i) + 1];
    if (d >= lo && d <= hi) {
      // snap to a pure level at the peaks so gridpoint densities fire a
      // single rule despite rounding dust
      double t = std::clamp((d - lo) / kLevelSpacing, 0.0, 1.0);
      if (t < 1e-9) t = 0.0;
      if (t > 1.0 - 1e-9) t = 1.0;
      m.w[static_cast<std::size_t>(i)] = 1.0 - t;
      m.w[static_cast<std::size_t>(i) + 1] = t;
      return m;
    }
  }
  throw std::logic_error("fuzzify: unreachable");
}

int rule_index(const std::array<int, 4>& level_idx) {
  int idx = 0;
  for (int l : level_idx) {
    if (l < 0 || l >= kNumLevels) throw std::out_of_range("rule_index: level out of range");
    idx = idx * kNumLevels + l;
  }
  return idx;
}

std::array<int, 4> rule_levels(int index) {
  if (index < 0 || index >= kNumRules) throw std::out_of_range("rule_levels: index out of range");
  std::array<int, 4> levels{};
  for (int i = 3; i >= 0; --i) {
    levels[static_cast<std::size_t>(i)] = index % kNumLevels;
    index /= kNumLevels;
  }
  return levels;
}

void RuleBase::set(const std::array<int, 4>& levels, int green_s) {
  const int idx = rule_index(levels);
  if (!present_[static_cast<std::size_t>(idx)]) ++count_;
  present_[static_cast<std::size_t>(idx)] = true;
  green_[static_cast<std::size_t>(idx)] = green_s;
}

std::optional<int> RuleBase::get(const std::array<int, 4>& levels) const {
  const int idx = rule_index(levels);
  if (!present_[static_cast<std::size_t>(idx)]) return std::nullopt;
  return green_[static_cast<std::size_t>(idx)];
}

void RuleBase::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("rulebase: cannot write " + path.string());
  out << "d1,d2,d3,d4,green\n";
  char line[96];
  for (int idx = 0; idx < kNumRules; ++idx) {
    if (!present_[static_cast<std::size_t>(idx)]) continue;
    const auto levels = rule_levels(idx);
    std::snprintf(line, sizeof line, "%.1f,%.1f,%.1f,%.1f,%d\n",
                  kDensityLevels[static_cast<std::size_t>(levels[0])],
                  kDensityLevels[static_cast<std::size_t>(levels[1])],
                  kDensityLevels[static_cast<std::size_t>(levels[2])],
                  kDensityLevels[static_cast<std::size_t>(levels[3])], green_[static_cast<std::size_t>(idx)]);
    out << line;
  }
  if (!out) throw std::runtime_error("rulebase: write failed for " + path.string());
}

RuleBase RuleBase::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("rulebase: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "d1,d2,d3,d4,green")
    throw std::runtime_error("rulebase: " + path.string() +
                             ": expected header d1,d2,d3,d4,green");
  RuleBase rb;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::array<double, 4> d{};
    int green = 0;
    char comma = 0;
    if (!(ss >> d[0] >> comma >> d[1] >> comma >> d[2] >> comma >> d[3] >> comma >> green))
      throw std::runtime_error("rulebase: " + path.string() + ":" + std::to_string(lineno) +
                               ": malformed row");
    std::array<int, 4> levels{};
    for (int i = 0; i < 4; ++i) {
      const int li = nearest_level(d[static_cast<std::size_t>(i)]);
      if (li < 0)
        throw std::runtime_error("rulebase: " + path.string() + ":" + std::to_string(lineno) +
                                 ": density is not one of the five levels");
      levels[static_cast<std::size_t>(i)] = li;
    }
    if (green < 1)
      throw std::runtime_error("rulebase: " + path.string() + ":" + std::to_string(lineno) +
                               ": green must be a positive whole number of seconds");
    if (rb.get(levels).has_value())
      throw std::runtime_error("rulebase: " + path.string() + ":" + std::to_string(lineno) +
                               ": duplicate level tuple");
    rb.set(levels, green);
  }
  return rb;
}

int infer_green(const std::array<double, 4>& densities, const RuleBase& rules,
                const IntersectionConfig& cfg) {
  std::array<LevelMembership, 4> m;
  for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] = fuzzify(densities[static_cast<std::size_t>(i)]);

  double weight_sum = 0.0;
  double green_sum = 0.0;
  for (int a = 0; a < kNumLevels; ++a) {
    if (m[0].w[static_cast<std::size_t>(a)] == 0.0) continue;
    for (int b = 0; b < kNumLevels; ++b) {
      if (m[1].w[static_cast<std::size_t>(b)] == 0.0) continue;
      for (int c = 0; c < kNumLevels; ++c) {
        if (m[2].w[static_cast<std::size_t>(c)] == 0.0) continue;
        for (int e = 0; e < kNumLevels; ++e) {
          if (m[3].w[static_cast<std::size_t>(e)] == 0.0) continue;
          const double w = m[0].w[static_cast<std::size_t>(a)] * m[1].w[static_cast<std::size_t>(b)] *
                           m[2].w[static_cast<std::size_t>(c)] * m[3].w[static_cast<std::size_t>(e)];
          const auto g = rules.get({a, b, c, e});
          if (!g.has_value())
            throw std::runtime_error(
                "infer_green: rule base is missing a fired rule; build a complete base with "
                "build-rulebase");
          weight_sum += w;
          green_sum += w * *g;
        }
      }
    }
  }
  const int g = static_cast<int>(std::llround(green_sum / weight_sum));
  return std::clamp(g, cfg.min_green_s, cfg.max_green_s);
}

int build_rule_for_state(const IntersectionConfig& cfg, const std::array<int, 4>& levels,
                         int repetitions, std::uint64_t state_seed, RuleBuildStats* stats) {
  if (repetitions < 1) throw std::invalid_argument("build_rule_for_state: repetitions must be >= 1");

  SensorFrame frame;
  for (int si = 0; si < 4; ++si) {
    // invert the density relation at an empty queue: demand = level/3 * capacity
    const double level = kDensityLevels[static_cast<std::size_t>(levels[static_cast<std::size_t>(si)])];
    frame.entered[static_cast<std::size_t>(si)] =
        static_cast<int>(std::llround(level / 3.0 * cfg.capacity_per_period));
  }

  std::map<int, int> histogram;  // optimal green -> occurrences
  long long sum = 0;
  for (int rep = 0; rep < repetitions; ++rep) {
    const auto seed = derive_seed(state_seed, 0xB17Du, static_cast<std::uint64_t>(rep));
    const auto decision = realtime_optimize(cfg, frame, {0, 0, 0, 0}, seed, 1);
    const int g = decision.plans.front().green1_s;
    histogram[g] += 1;
    sum += g;
  }

  // frequency-weighted average of the per-repetition optima
  const int stored = static_cast<int>(std::llround(static_cast<double>(sum) / repetitions));

  if (stats) {
    stats->levels = levels;
    stats->stored_green = stored;
    int mode = 0, mode_count = -1;
    for (const auto& [g, n] : histogram)
      if (n > mode_count) {  // ties keep the smaller green (map is ordered)
        mode = g;
        mode_count = n;
      }
    int near = 0;
    for (const auto& [g, n] : histogram)
      if (std::abs(g - mode) <= 2) near += n;
    stats->modal_green = mode;
    stats->within_2s_of_mode = static_cast<double>(near) / repetitions;
    stats->min_green = histogram.begin()->first;
    stats->max_green = histogram.rbegin()->first;
  }
  return stored;
}

RuleBase build_rulebase(const IntersectionConfig& cfg, int repetitions,
                        std::uint64_t base_seed, int threads,
                        std::vector<RuleBuildStats>* stats,
                        const std::function<void(int, int)>& progress) {
  cfg.validate();
  if (repetitions < 1) throw std::invalid_argument("build_rulebase: repetitions must be >= 1");

  std::array<int, kNumRules> greens{};
  std::vector<RuleBuildStats> all_stats(kNumRules);

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= kNumRules) return;
      const auto levels = rule_levels(idx);
      const auto state_seed = derive_seed(base_seed, 0x57A7Eu, static_cast<std::uint64_t>(idx));
      greens[static_cast<std::size_t>(idx)] =
          build_rule_for_state(cfg, levels, repetitions, state_seed, &all_stats[static_cast<std::size_t>(idx)]);
      const int d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(d, kNumRules);
      }
    }
  };

  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  RuleBase rb;
  for (int idx = 0; idx < kNumRules; ++idx) rb.set(rule_levels(idx), greens[static_cast<std::size_t>(idx)]);
  rb.metadata().build_seed = base_seed;
  rb.metadata().repetitions = repetitions;
  rb.metadata().builder = "build_rulebase/1";
  if (stats) *stats = std::move(all_stats);
  return rb;
}

}  // namespace sigsim
