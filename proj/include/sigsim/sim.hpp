#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sigsim/config.hpp"

namespace sigsim {

enum class Intent : std::uint8_t { straight, left, right };
enum class Signal : std::uint8_t { green, yellow, red };

struct TurnFractions {
  double left_pct = 0.0;
  double right_pct = 0.0;

  bool valid() const {
    return left_pct >= 0.0 && right_pct >= 0.0 && left_pct + right_pct <= 100.0;
  }
  bool operator==(const TurnFractions&) const = default;
};

/// One vehicle, tracked only by existence: where and when it entered, what it
/// intends to do at the stop line, and when it left.
struct VehicleRecord {
  std::int32_t id = 0;
  std::int8_t street = 0;   // 0..3
  std::int8_t lane = -1;    // 0..2 once assigned; -1 = pick shortest on entry
  Intent intent = Intent::straight;
  std::int32_t entry_tick = 0;
  std::int32_t exit_tick = -1;  // -1 while still in the system
};

/// Entry ticks for `flow_count` vehicles within one data-submission period.
/// Samples a normal centered on the period midpoint with sigma = period/6
/// (so +-3 sigma spans the period), clips to the period and sorts.
std::vector<int> generate_arrivals(int flow_count, int period_start, int period_len,
                                   std::uint64_t seed);

/// Entry-sorted stubs for one street from a list of arrival ticks.
std::vector<VehicleRecord> make_stubs(int street, const std::vector<int>& entry_ticks,
                                      std::int32_t first_id);

/// Draws an intent per vehicle from its street's turn fractions and fixes the
/// lane for turners (left -> leftmost, right -> rightmost). Straight vehicles
/// keep lane = -1 and take the shortest queue when they enter.
std::vector<VehicleRecord> assign_intents(
    std::vector<VehicleRecord> stubs,
    const std::array<TurnFractions, IntersectionConfig::num_streets>& turns,
    std::uint64_t seed);

/// Signal shown to `street` at `offset` seconds into a cycle under `plan`.
/// Phase 1 (streets 0 and 2) leads the cycle, phase 2 (streets 1 and 3) follows.
Signal signal_for(const PhasePlan& plan, int street, int offset_in_cycle);

struct StreetCounters {
  int queue_len = 0;
  long long delay_veh_s = 0;       // time-integral of queue length
  int entered_period = 0;          // sensor counts, reset at period boundaries
  int exited_period = 0;
  long long entered_total = 0;     // whole-run counts, never reset
  long long exited_total = 0;
  bool critical = false;           // queue spilled past the entry sensor
  long long critical_ticks = 0;
};

struct SimResult {
  std::array<std::vector<int>, IntersectionConfig::num_streets> queue_series;
  std::vector<int> sqs_series;       // total queue per tick
  std::array<long long, IntersectionConfig::num_streets> delay_per_street{};
  long long total_delay = 0;
  int max_sqs = 0;
  long long vehicles_processed = 0;  // departures
  std::array<long long, IntersectionConfig::num_streets> critical_ticks{};
};

/// Discrete-time (1 s tick) microscopic engine for a single intersection.
///
/// Per tick: arrivals join their lane queues, then each green street releases
/// at most one vehicle per lane every `saturation_headway_ticks`, subject to
/// turn priority at the queue heads (straight > right > left), then queue
/// lengths, delays and the critical flags are updated. Yellow and red release
/// nothing. Fully deterministic given its inputs.
class Engine {
 public:
  explicit Engine(const IntersectionConfig& cfg, bool record_series = false);

  /// Appends pre-generated vehicles for a street. Entry ticks must be sorted
  /// and not precede ticks already queued for that street.
  void add_vehicles(int street, const std::vector<VehicleRecord>& vehicles);

  /// Places `count` already-queued vehicles into a lane before the run starts
  /// (prediction horizons start from a sensed queue). Counts toward totals
  /// but not toward the period sensor counters.
  void seed_queue(int street, int lane, int count, Intent intent = Intent::straight);

  /// Extends the per-cycle plan schedule. Cycle c covers ticks
  /// [c*cycle_s, (c+1)*cycle_s) from tick 0.
  void append_plan(const PhasePlan& plan, int cycles = 1);

  void step();                 // one tick; throws if the plan schedule ran out
  void run_to(int tick_end);   // steps until now() == tick_end

  int now() const { return now_; }
  const StreetCounters& street(int i) const { return streets_[i].c; }
  int total_queue() const;
  long long total_delay() const;
  Signal signal(int street) const;  // signal that street sees at the current tick

  /// Resets the period sensor counters (call at data-submission boundaries).
  void begin_period();

  /// Per-tick conservation self-check failures (entered != exited + queued).
  /// Structurally zero; exposed so harnesses can assert it.
  long long conservation_violations() const { return conservation_violations_; }

  /// All vehicles of a street, exit ticks filled in for departures.
  const std::vector<VehicleRecord>& vehicles(int street) const {
    return streets_[street].vehicles;
  }

  SimResult result() const;

 private:
  struct Lane {
    std::vector<std::int32_t> q;  // indices into StreetSim::vehicles
    std::size_t head = 0;
    int cooldown = 0;
    std::size_t size() const { return q.size() - head; }
  };
  struct StreetSim {
    std::vector<VehicleRecord> vehicles;
    std::size_t cursor = 0;  // next not-yet-entered vehicle
    std::array<Lane, IntersectionConfig::lanes_per_street> lanes;
    StreetCounters c;
  };

  void enqueue(StreetSim& s, std::int32_t veh_index);

  IntersectionConfig cfg_;
  bool record_series_;
  int now_ = 0;
  std::vector<PhasePlan> plans_;  // per absolute cycle
  std::array<StreetSim, IntersectionConfig::num_streets> streets_;
  SimResult series_;  // series filled when recording; totals finalized in result()
  long long conservation_violations_ = 0;
  int max_sqs_ = 0;
};

/// Runs a fresh engine over `horizon` ticks and returns the aggregate result.
/// `plans` must cover every cycle that starts before the horizon ends.
SimResult run_horizon(const IntersectionConfig& cfg,
                      const std::array<std::vector<VehicleRecord>,
                                       IntersectionConfig::num_streets>& vehicles,
                      const std::array<int, IntersectionConfig::num_streets>& initial_queue,
                      const std::vector<PhasePlan>& plans, int horizon,
                      bool record_series = true);

/// Raw sensor-occupancy ratio (queue carried over the period's cycles plus
/// fresh inflow, over street capacity).
double occupancy_ratio(double queue_est, double entered, double capacity,
                       double cycles_per_period);

/// Street density on the [0, 3] scale used by the fuzzy system: the occupancy
/// ratio spread over the three lanes (a saturated street maps to 3.0), clamped.
double street_density(double queue_est, double entered, const IntersectionConfig& cfg);

}  // namespace sigsim
