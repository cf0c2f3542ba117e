#include "sigsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sigsim/rng.hpp"

namespace sigsim {

std::vector<int> generate_arrivals(int flow_count, int period_start, int period_len,
                                   std::uint64_t seed) {
  if (flow_count < 0) throw std::invalid_argument("generate_arrivals: negative flow count");
  if (period_len <= 0) throw std::invalid_argument("generate_arrivals: period length must be > 0");

  Rng rng(seed);
  const double mid = period_start + period_len / 2.0;
  const double sigma = period_len / 6.0;
  std::vector<int> ticks;
  ticks.reserve(static_cast<std::size_t>(flow_count));
  for (int i = 0; i < flow_count; ++i) {
    long t = std::lround(rng.normal(mid, sigma));
    t = std::clamp(t, static_cast<long>(period_start),
                   static_cast<long>(period_start) + period_len - 1);
    ticks.push_back(static_cast<int>(t));
  }
  std::sort(ticks.begin(), ticks.end());
  return ticks;
}

std::vector<VehicleRecord> make_stubs(int street, const std::vector<int>& entry_ticks,
                                      std::int32_t first_id) {
  std::vector<VehicleRecord> out;
  out.reserve(entry_ticks.size());
  std::int32_t id = first_id;
  for (int t : entry_ticks) {
    VehicleRecord v;
    v.id = id++;
    v.street = static_cast<std::int8_t>(street);
    v.entry_tick = t;
    out.push_back(v);
  }
  return out;
}

std::vector<VehicleRecord> assign_intents(
    std::vector<VehicleRecord> stubs,
    const std::array<TurnFractions, IntersectionConfig::num_streets>& turns,
    std::uint64_t seed) {
  for (const auto& tf : turns)
    if (!tf.valid())
      throw std::invalid_argument("assign_intents: turn fractions must be >= 0 and sum to <= 100%");

  Rng rng(seed);
  for (auto& v : stubs) {
    const auto& tf = turns[static_cast<std::size_t>(v.street)];
    const double u = rng.uniform01() * 100.0;
    if (u < tf.left_pct) {
      v.intent = Intent::left;
      v.lane = 0;  // leftmost
    } else if (u < tf.left_pct + tf.right_pct) {
      v.intent = Intent::right;
      v.lane = IntersectionConfig::lanes_per_street - 1;  // rightmost
    } else {
      v.intent = Intent::straight;
      v.lane = -1;  // shortest queue on entry
    }
  }
  return stubs;
}

Signal signal_for(const PhasePlan& plan, int street, int offset_in_cycle) {
  const bool phase1_street = (street % 2 == 0);  // streets 1 & 3
  const int g1_end = plan.green1_s;
  const int y1_end = g1_end + plan.yellow_s;
  const int g2_end = y1_end + plan.green2_s;
  if (offset_in_cycle < g1_end) return phase1_street ? Signal::green : Signal::red;
  if (offset_in_cycle < y1_end) return phase1_street ? Signal::yellow : Signal::red;
  if (offset_in_cycle < g2_end) return phase1_street ? Signal::red : Signal::green;
  return phase1_street ? Signal::red : Signal::yellow;
}

Engine::Engine(const IntersectionConfig& cfg, bool record_series)
    : cfg_(cfg), record_series_(record_series) {
  cfg_.validate();
}

void Engine::add_vehicles(int street, const std::vector<VehicleRecord>& vehicles) {
  auto& s = streets_[static_cast<std::size_t>(street)];
  int last = s.vehicles.empty() ? now_ : s.vehicles.back().entry_tick;
  for (const auto& v : vehicles) {
    if (v.entry_tick < last)
      throw std::invalid_argument("add_vehicles: entry ticks must be non-decreasing");
    last = v.entry_tick;
    s.vehicles.push_back(v);
  }
}

void Engine::seed_queue(int street, int lane, int count, Intent intent) {
  if (now_ != 0) throw std::logic_error("seed_queue: only valid before the run starts");
  auto& s = streets_[static_cast<std::size_t>(street)];
  if (!s.vehicles.empty() && s.cursor < s.vehicles.size())
    throw std::logic_error("seed_queue: seed queues before adding arrivals");
  for (int i = 0; i < count; ++i) {
    VehicleRecord v;
    v.id = static_cast<std::int32_t>(s.vehicles.size());
    v.street = static_cast<std::int8_t>(street);
    v.lane = static_cast<std::int8_t>(lane);
    v.intent = intent;
    v.entry_tick = 0;
    s.vehicles.push_back(v);
    s.lanes[static_cast<std::size_t>(lane)].q.push_back(v.id);
    s.c.queue_len += 1;
    s.c.entered_total += 1;  // pre-existing queue: counts for conservation only
  }
  s.cursor = s.vehicles.size();
}

void Engine::append_plan(const PhasePlan& plan, int cycles) {
  if (plan.cycle_s() != cfg_.cycle_s)
    throw std::invalid_argument("append_plan: plan does not fill the cycle");
  if (plan.green1_s < 0 || plan.green2_s < 0)
    throw std::invalid_argument("append_plan: negative green time");
  for (int i = 0; i < cycles; ++i) plans_.push_back(plan);
}

void Engine::enqueue(StreetSim& s, std::int32_t veh_index) {
  auto& v = s.vehicles[static_cast<std::size_t>(veh_index)];
  int lane = v.lane;
  if (lane < 0) {  // straight: shortest queue, leftmost wins ties
    std::size_t best = 0;
    for (std::size_t l = 1; l < s.lanes.size(); ++l)
      if (s.lanes[l].size() < s.lanes[best].size()) best = l;
    lane = static_cast<int>(best);
    v.lane = static_cast<std::int8_t>(lane);
  }
  s.lanes[static_cast<std::size_t>(lane)].q.push_back(veh_index);
  s.c.queue_len += 1;
}

void Engine::step() {
  const std::size_t cycle = static_cast<std::size_t>(now_) / static_cast<std::size_t>(cfg_.cycle_s);
  if (cycle >= plans_.size())
    throw std::runtime_error("engine: plan schedule shorter than the requested horizon");
  const PhasePlan& plan = plans_[cycle];
  const int offset = now_ % cfg_.cycle_s;

  for (auto& s : streets_) {
    // arrivals join their queues first; a same-tick departure is possible
    while (s.cursor < s.vehicles.size() && s.vehicles[s.cursor].entry_tick == now_) {
      enqueue(s, static_cast<std::int32_t>(s.cursor));
      s.c.entered_period += 1;
      s.c.entered_total += 1;
      ++s.cursor;
    }
  }

  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    auto& s = streets_[static_cast<std::size_t>(si)];
    const Signal sig = signal_for(plan, si, offset);
    if (sig != Signal::green) {
      for (auto& lane : s.lanes)
        if (lane.cooldown > 0) --lane.cooldown;
      continue;
    }

    // head-of-lane snapshot so this tick's departures don't unlock each other
    std::array<int, IntersectionConfig::lanes_per_street> head_intent;  // -1 = empty
    for (std::size_t l = 0; l < s.lanes.size(); ++l) {
      const auto& lane = s.lanes[l];
      head_intent[l] = lane.size() == 0
                           ? -1
                           : static_cast<int>(s.vehicles[static_cast<std::size_t>(lane.q[lane.head])].intent);
    }

    for (std::size_t l = 0; l < s.lanes.size(); ++l) {
      auto& lane = s.lanes[l];
      if (lane.cooldown > 0) {
        --lane.cooldown;
        continue;
      }
      if (lane.size() == 0) continue;

      const auto intent = static_cast<Intent>(head_intent[l]);
      bool allowed = true;
      if (intent == Intent::right) {
        // right of way over left turns, but a right turn in the lane to the
        // left goes first: yield one slot
        allowed = !(l > 0 && head_intent[l - 1] == static_cast<int>(Intent::right));
      } else if (intent == Intent::left) {
        // may go only when the lane to the left is clear or also turning left
        allowed = l == 0 || head_intent[l - 1] == -1 ||
                  head_intent[l - 1] == static_cast<int>(Intent::left);
      }
      if (!allowed) continue;

      auto& v = s.vehicles[static_cast<std::size_t>(lane.q[lane.head])];
      v.exit_tick = now_;
      ++lane.head;
      lane.cooldown = cfg_.saturation_headway_ticks - 1;
      s.c.queue_len -= 1;
      s.c.exited_period += 1;
      s.c.exited_total += 1;
    }
  }

  int sqs = 0;
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    auto& c = streets_[static_cast<std::size_t>(si)].c;
    c.critical = c.queue_len > cfg_.critical_queue_threshold();
    if (c.critical) c.critical_ticks += 1;
    c.delay_veh_s += static_cast<long long>(c.queue_len) * cfg_.tick_s;
    sqs += c.queue_len;
    if (c.entered_total != c.exited_total + c.queue_len) ++conservation_violations_;
    if (record_series_)
      series_.queue_series[static_cast<std::size_t>(si)].push_back(c.queue_len);
  }
  max_sqs_ = std::max(max_sqs_, sqs);
  if (record_series_) series_.sqs_series.push_back(sqs);

  ++now_;
}

void Engine::run_to(int tick_end) {
  while (now_ < tick_end) step();
}

int Engine::total_queue() const {
  int q = 0;
  for (const auto& s : streets_) q += s.c.queue_len;
  return q;
}

long long Engine::total_delay() const {
  long long d = 0;
  for (const auto& s : streets_) d += s.c.delay_veh_s;
  return d;
}

Signal Engine::signal(int street) const {
  const std::size_t cycle = static_cast<std::size_t>(now_) / static_cast<std::size_t>(cfg_.cycle_s);
  if (cycle >= plans_.size()) return Signal::red;
  return signal_for(plans_[cycle], street, now_ % cfg_.cycle_s);
}

void Engine::begin_period() {
  for (auto& s : streets_) {
    s.c.entered_period = 0;
    s.c.exited_period = 0;
  }
}

SimResult Engine::result() const {
  SimResult r = series_;
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    const auto& c = streets_[static_cast<std::size_t>(si)].c;
    r.delay_per_street[static_cast<std::size_t>(si)] = c.delay_veh_s;
    r.total_delay += c.delay_veh_s;
    r.vehicles_processed += c.exited_total;
    r.critical_ticks[static_cast<std::size_t>(si)] = c.critical_ticks;
  }
  r.max_sqs = max_sqs_;
  return r;
}

SimResult run_horizon(const IntersectionConfig& cfg,
                      const std::array<std::vector<VehicleRecord>,
                                       IntersectionConfig::num_streets>& vehicles,
                      const std::array<int, IntersectionConfig::num_streets>& initial_queue,
                      const std::vector<PhasePlan>& plans, int horizon,
                      bool record_series) {
  const int cycles_needed = (horizon + cfg.cycle_s - 1) / cfg.cycle_s;
  if (static_cast<int>(plans.size()) < cycles_needed)
    throw std::invalid_argument("run_horizon: plan schedule shorter than the horizon");

  Engine eng(cfg, record_series);
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    for (int k = 0; k < initial_queue[static_cast<std::size_t>(si)]; ++k)
      eng.seed_queue(si, k % IntersectionConfig::lanes_per_street, 1);
    eng.add_vehicles(si, vehicles[static_cast<std::size_t>(si)]);
  }
  for (const auto& p : plans) eng.append_plan(p);
  eng.run_to(horizon);
  return eng.result();
}

double occupancy_ratio(double queue_est, double entered, double capacity,
                       double cycles_per_period) {
  if (capacity <= 0.0)
    throw std::invalid_argument("occupancy_ratio: street capacity must be > 0");
  return (cycles_per_period * queue_est + entered) / capacity;
}

double street_density(double queue_est, double entered, const IntersectionConfig& cfg) {
  const double ratio = occupancy_ratio(queue_est, entered, cfg.capacity_per_period,
                                       cfg.cycles_per_period());
  const double lanes = IntersectionConfig::lanes_per_street;
  return std::clamp(lanes * ratio, 0.0, lanes);
}

}  // namespace sigsim
