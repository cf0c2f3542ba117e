#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sigsim/controllers.hpp"
#include "sigsim/fuzzy.hpp"
#include "sigsim/harness.hpp"
#include "sigsim/scenario.hpp"
#include "sigsim/sim.hpp"

namespace py = pybind11;
using namespace sigsim;

namespace {

ControllerKind kind_from(const std::string& name) {
  const auto k = controller_from_name(name);
  if (!k) throw std::invalid_argument("unknown controller '" + name + "'");
  return *k;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Signalized-intersection simulator and signal-timing controller suite";

  py::class_<PhasePlan>(m, "PhasePlan")
      .def(py::init<>())
      .def(py::init([](int g1, int g2, int y) { return PhasePlan{g1, g2, y}; }),
           py::arg("green1_s"), py::arg("green2_s"), py::arg("yellow_s") = 4)
      .def_readwrite("green1_s", &PhasePlan::green1_s)
      .def_readwrite("green2_s", &PhasePlan::green2_s)
      .def_readwrite("yellow_s", &PhasePlan::yellow_s)
      .def("cycle_s", &PhasePlan::cycle_s)
      .def("__repr__", [](const PhasePlan& p) {
        return "PhasePlan(green1_s=" + std::to_string(p.green1_s) +
               ", green2_s=" + std::to_string(p.green2_s) +
               ", yellow_s=" + std::to_string(p.yellow_s) + ")";
      });

  py::class_<IntersectionConfig>(m, "IntersectionConfig")
      .def(py::init<>())
      .def_readwrite("cycle_s", &IntersectionConfig::cycle_s)
      .def_readwrite("yellow_s", &IntersectionConfig::yellow_s)
      .def_readwrite("sensor_gap_m", &IntersectionConfig::sensor_gap_m)
      .def_readwrite("vehicle_space_m", &IntersectionConfig::vehicle_space_m)
      .def_readwrite("saturation_headway_ticks", &IntersectionConfig::saturation_headway_ticks)
      .def_readwrite("period_s", &IntersectionConfig::period_s)
      .def_readwrite("capacity_per_period", &IntersectionConfig::capacity_per_period)
      .def_readwrite("min_green_s", &IntersectionConfig::min_green_s)
      .def_readwrite("max_green_s", &IntersectionConfig::max_green_s)
      .def("green_budget_s", &IntersectionConfig::green_budget_s)
      .def("cycles_per_period", &IntersectionConfig::cycles_per_period)
      .def("critical_queue_threshold", &IntersectionConfig::critical_queue_threshold)
      .def("validate", &IntersectionConfig::validate);

  py::class_<TurnFractions>(m, "TurnFractions")
      .def(py::init([](double l, double r) { return TurnFractions{l, r}; }),
           py::arg("left_pct") = 0.0, py::arg("right_pct") = 0.0)
      .def_readwrite("left_pct", &TurnFractions::left_pct)
      .def_readwrite("right_pct", &TurnFractions::right_pct);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("start_minute", &Scenario::start_minute)
      .def_readwrite("end_minute", &Scenario::end_minute)
      .def_readwrite("period_s", &Scenario::period_s)
      .def_readwrite("flows", &Scenario::flows)
      .def_readwrite("turns", &Scenario::turns)
      .def_readwrite("master_seed", &Scenario::master_seed)
      .def("num_periods", &Scenario::num_periods)
      .def("horizon_ticks", &Scenario::horizon_ticks)
      .def("daily_average_flows", &Scenario::daily_average_flows)
      .def("validate", &Scenario::validate);

  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));

  py::class_<SensorFrame>(m, "SensorFrame")
      .def(py::init<>())
      .def_readwrite("period_index", &SensorFrame::period_index)
      .def_readwrite("entered", &SensorFrame::entered)
      .def_readwrite("exited", &SensorFrame::exited);

  py::class_<QueueEstimate>(m, "QueueEstimate")
      .def_readonly("queue", &QueueEstimate::queue)
      .def_readonly("sensor_inconsistency", &QueueEstimate::sensor_inconsistency);

  m.def("estimate_queue", &estimate_queue, py::arg("entered_history"),
        py::arg("exited_history"));
  m.def("occupancy_ratio", &occupancy_ratio, py::arg("queue_est"), py::arg("entered"),
        py::arg("capacity"), py::arg("cycles_per_period"));
  m.def("street_density", &street_density, py::arg("queue_est"), py::arg("entered"),
        py::arg("config"));
  m.def("generate_arrivals", &generate_arrivals, py::arg("flow_count"), py::arg("period_start"),
        py::arg("period_len"), py::arg("seed"));

  m.def(
      "fuzzify",
      [](double density) {
        const auto m_ = fuzzify(density);
        return m_.w;
      },
      py::arg("density"));

  py::class_<RuleBase>(m, "RuleBase")
      .def(py::init<>())
      .def("set", &RuleBase::set, py::arg("levels"), py::arg("green_s"))
      .def("get", &RuleBase::get, py::arg("levels"))
      .def("complete", &RuleBase::complete)
      .def("size", &RuleBase::size)
      .def("save_csv", &RuleBase::save_csv, py::arg("path"))
      .def_static("load_csv", &RuleBase::load_csv, py::arg("path"));

  m.def("infer_green", &infer_green, py::arg("densities"), py::arg("rules"), py::arg("config"));
  m.def("density_levels", [] { return kDensityLevels; });
  m.def("rule_levels", &rule_levels, py::arg("index"));
  m.def("rule_index", &rule_index, py::arg("levels"));
  m.def(
      "build_rulebase",
      [](const IntersectionConfig& cfg, int repetitions, std::uint64_t base_seed, int threads) {
        return build_rulebase(cfg, repetitions, base_seed, threads);
      },
      py::arg("config"), py::arg("repetitions") = 100, py::arg("base_seed") = 1,
      py::arg("threads") = 1);

  py::class_<ControllerDecision>(m, "ControllerDecision")
      .def_readonly("plans", &ControllerDecision::plans)
      .def_readonly("predicted_delay", &ControllerDecision::predicted_delay)
      .def_readonly("candidates_evaluated", &ControllerDecision::candidates_evaluated);

  m.def("fixed_time", &fixed_time, py::arg("config"), py::arg("num_cycles") = 1);
  m.def("pretimed", &pretimed, py::arg("config"), py::arg("daily_average_flows"),
        py::arg("num_cycles") = 1);
  m.def("realtime_optimize", &realtime_optimize, py::arg("config"), py::arg("frame"),
        py::arg("queue_start"), py::arg("seed"), py::arg("num_cycles") = 1);
  m.def("fuzzy_control", &fuzzy_control, py::arg("config"), py::arg("frame"),
        py::arg("queue_start"), py::arg("rules"), py::arg("num_cycles") = 1);
  m.def("fuzzyreal_optimize", &fuzzyreal_optimize, py::arg("config"), py::arg("frame"),
        py::arg("queue_start"), py::arg("rules"), py::arg("seed"), py::arg("num_cycles") = 1);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("controller", &RunReport::controller)
      .def_readonly("total_delay", &RunReport::total_delay)
      .def_readonly("street_delay", &RunReport::street_delay)
      .def_readonly("period_delay", &RunReport::period_delay)
      .def_readonly("max_sqs", &RunReport::max_sqs)
      .def_readonly("sqs_series", &RunReport::sqs_series)
      .def_readonly("candidates_evaluated", &RunReport::candidates_evaluated)
      .def_readonly("vehicles_processed", &RunReport::vehicles_processed)
      .def_readonly("wall_seconds", &RunReport::wall_seconds);

  m.def(
      "run_controller",
      [](const IntersectionConfig& cfg, const Scenario& scenario, const std::string& controller,
         const RuleBase* rules, std::uint64_t seed, int segment_len) {
        RunOptions opt;
        opt.seed = seed;
        opt.segment_len_periods = segment_len;
        return run_controller(cfg, scenario, kind_from(controller), rules, opt);
      },
      py::arg("config"), py::arg("scenario"), py::arg("controller"),
      py::arg("rules") = nullptr, py::arg("seed") = 0, py::arg("segment_len") = 4);

  m.def(
      "run_all",
      [](const IntersectionConfig& cfg, const Scenario& scenario, const RuleBase& rules,
         std::uint64_t seed, int segment_len) {
        RunOptions opt;
        opt.seed = seed;
        opt.segment_len_periods = segment_len;
        return run_all(cfg, scenario, rules, opt);
      },
      py::arg("config"), py::arg("scenario"), py::arg("rules"), py::arg("seed") = 0,
      py::arg("segment_len") = 4);

  m.def("export_reports", &export_reports, py::arg("reports"), py::arg("out_dir"));
  m.def("improvement_pct", &improvement_pct, py::arg("delay"), py::arg("fixed_delay"));

  m.attr("NUM_RULES") = kNumRules;
  m.attr("__version__") = "0.1.0";
}
