#include "sigsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sigsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_clock(const std::string& text, const std::string& key, int lineno) {
  int h = 0, m = 0;
  char colon = 0;
  std::istringstream ss(text);
  if (!(ss >> h >> colon >> m) || colon != ':' || h < 0 || h > 24 || m < 0 || m > 59)
    throw std::runtime_error("scenario:" + std::to_string(lineno) + ": " + key +
                             " must be HH:MM, got '" + text + "'");
  return h * 60 + m;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key, int lineno) {
  std::vector<int> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::runtime_error("scenario:" + std::to_string(lineno) + ": " + key +
                               ": empty entry in list");
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size())
      throw std::runtime_error("scenario:" + std::to_string(lineno) + ": " + key +
                               ": '" + item + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::array<double, IntersectionConfig::num_streets> Scenario::daily_average_flows() const {
  std::array<double, IntersectionConfig::num_streets> avg{};
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    const auto& f = flows[static_cast<std::size_t>(si)];
    if (f.empty()) continue;
    double sum = 0;
    for (int v : f) sum += v;
    avg[static_cast<std::size_t>(si)] = sum / static_cast<double>(f.size());
  }
  return avg;
}

std::vector<std::array<double, IntersectionConfig::num_streets>>
Scenario::segment_average_flows(int segment_len_periods) const {
  if (segment_len_periods < 1)
    throw std::invalid_argument("segment length must be >= 1 period");
  const int periods = num_periods();
  std::vector<std::array<double, IntersectionConfig::num_streets>> out;
  for (int begin = 0; begin < periods; begin += segment_len_periods) {
    const int end = std::min(begin + segment_len_periods, periods);
    std::array<double, IntersectionConfig::num_streets> avg{};
    for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
      double sum = 0;
      for (int k = begin; k < end; ++k)
        sum += flows[static_cast<std::size_t>(si)][static_cast<std::size_t>(k)];
      avg[static_cast<std::size_t>(si)] = sum / (end - begin);
    }
    out.push_back(avg);
  }
  return out;
}

void Scenario::validate() const {
  if (period_s <= 0) throw std::runtime_error("scenario: period_s must be > 0");
  if (end_minute <= start_minute)
    throw std::runtime_error("scenario: end time must be after start time");
  if ((end_minute - start_minute) * 60 % period_s != 0)
    throw std::runtime_error("scenario: day span must be a whole number of periods");
  const int periods = num_periods();
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    const auto& f = flows[static_cast<std::size_t>(si)];
    if (static_cast<int>(f.size()) != periods)
      throw std::runtime_error("scenario: street " + std::to_string(si + 1) + " has " +
                               std::to_string(f.size()) + " flow entries, expected " +
                               std::to_string(periods));
    for (std::size_t k = 0; k < f.size(); ++k)
      if (f[k] < 0)
        throw std::runtime_error("scenario: street " + std::to_string(si + 1) + " period " +
                                 std::to_string(k) + ": negative flow");
    if (!turns[static_cast<std::size_t>(si)].valid())
      throw std::runtime_error("scenario: street " + std::to_string(si + 1) +
                               ": turn fractions must be >= 0 and sum to <= 100%");
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("scenario: cannot open " + path.string());

  Scenario s;
  s.name = path.stem().string();
  std::array<bool, IntersectionConfig::num_streets> have_flows{};

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("scenario:" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "name") {
      s.name = value;
    } else if (key == "start") {
      s.start_minute = parse_clock(value, key, lineno);
    } else if (key == "end") {
      s.end_minute = parse_clock(value, key, lineno);
    } else if (key == "period_s") {
      s.period_s = std::stoi(value);
    } else if (key == "master_seed") {
      s.master_seed = std::stoull(value);
    } else if (key.rfind("turns_street", 0) == 0) {
      const int si = std::stoi(key.substr(12)) - 1;
      if (si < 0 || si >= IntersectionConfig::num_streets)
        throw std::runtime_error("scenario:" + std::to_string(lineno) + ": bad street in " + key);
      std::string v = value;
      std::replace(v.begin(), v.end(), ',', ' ');
      std::istringstream ss(v);
      double left = 0, right = 0;
      if (!(ss >> left >> right))
        throw std::runtime_error("scenario:" + std::to_string(lineno) + ": " + key +
                                 " needs two numbers (left% right%)");
      s.turns[static_cast<std::size_t>(si)] = TurnFractions{left, right};
    } else if (key.rfind("flows_street", 0) == 0) {
      const int si = std::stoi(key.substr(12)) - 1;
      if (si < 0 || si >= IntersectionConfig::num_streets)
        throw std::runtime_error("scenario:" + std::to_string(lineno) + ": bad street in " + key);
      s.flows[static_cast<std::size_t>(si)] = parse_int_list(value, key, lineno);
      have_flows[static_cast<std::size_t>(si)] = true;
    } else {
      throw std::runtime_error("scenario:" + std::to_string(lineno) + ": unknown key '" + key +
                               "'");
    }
  }

  for (int si = 0; si < IntersectionConfig::num_streets; ++si)
    if (!have_flows[static_cast<std::size_t>(si)])
      throw std::runtime_error("scenario: missing flows_street" + std::to_string(si + 1));

  s.validate();
  return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("scenario: cannot write " + path.string());
  char buf[64];
  out << "name = " << s.name << "\n";
  std::snprintf(buf, sizeof buf, "%02d:%02d", s.start_minute / 60, s.start_minute % 60);
  out << "start = " << buf << "\n";
  std::snprintf(buf, sizeof buf, "%02d:%02d", s.end_minute / 60, s.end_minute % 60);
  out << "end = " << buf << "\n";
  out << "period_s = " << s.period_s << "\n";
  out << "master_seed = " << s.master_seed << "\n";
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    const auto& t = s.turns[static_cast<std::size_t>(si)];
    std::snprintf(buf, sizeof buf, "%.12g %.12g", t.left_pct, t.right_pct);
    out << "turns_street" << si + 1 << " = " << buf << "\n";
  }
  for (int si = 0; si < IntersectionConfig::num_streets; ++si) {
    out << "flows_street" << si + 1 << " = ";
    const auto& f = s.flows[static_cast<std::size_t>(si)];
    for (std::size_t k = 0; k < f.size(); ++k) out << (k ? "," : "") << f[k];
    out << "\n";
  }
  if (!out) throw std::runtime_error("scenario: write failed for " + path.string());
}

double improvement_pct(long long delay, long long fixed_delay) {
  if (fixed_delay == 0) return 0.0;
  return 100.0 * (1.0 - static_cast<double>(delay) / static_cast<double>(fixed_delay));
}

void export_reports(const std::vector<RunReport>& reports,
                    const std::filesystem::path& out_dir) {
  if (reports.empty()) throw std::invalid_argument("export_reports: no reports");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  const RunReport* fixed = nullptr;
  for (const auto& r : reports)
    if (r.controller == "fixed") fixed = &r;

  {
    std::ofstream out(out_dir / "summary.csv");
    if (!out) throw std::runtime_error("export: cannot write " + (out_dir / "summary.csv").string());
    out << "controller,total_delay_veh_s,max_sqs,improvement_vs_fixed_pct,"
           "candidates_evaluated,vehicles_processed,delay_street1,delay_street2,"
           "delay_street3,delay_street4\n";
    char pct[32];
    for (const auto& r : reports) {
      if (fixed)
        std::snprintf(pct, sizeof pct, "%.2f", improvement_pct(r.total_delay, fixed->total_delay));
      else
        pct[0] = '\0';
      out << r.controller << ',' << r.total_delay << ',' << r.max_sqs << ',' << pct << ','
          << r.candidates_evaluated << ',' << r.vehicles_processed;
      for (const auto d : r.street_delay) out << ',' << d;
      out << '\n';
    }
    if (!out) throw std::runtime_error("export: write failed for summary.csv");
  }

  {
    std::ofstream out(out_dir / "period_delay.csv");
    if (!out)
      throw std::runtime_error("export: cannot write " + (out_dir / "period_delay.csv").string());
    out << "period,controller,delay_veh_s\n";
    std::size_t periods = 0;
    for (const auto& r : reports) periods = std::max(periods, r.period_delay.size());
    for (std::size_t k = 0; k < periods; ++k)
      for (const auto& r : reports)
        if (k < r.period_delay.size())
          out << k << ',' << r.controller << ',' << r.period_delay[k] << '\n';
    if (!out) throw std::runtime_error("export: write failed for period_delay.csv");
  }

  {
    std::ofstream out(out_dir / "sqs_series.csv");
    if (!out)
      throw std::runtime_error("export: cannot write " + (out_dir / "sqs_series.csv").string());
    out << "tick,controller,sqs\n";
    std::size_t ticks = 0;
    for (const auto& r : reports) ticks = std::max(ticks, r.sqs_series.size());
    for (std::size_t t = 0; t < ticks; ++t)
      for (const auto& r : reports)
        if (t < r.sqs_series.size())
          out << t << ',' << r.controller << ',' << r.sqs_series[t] << '\n';
    if (!out) throw std::runtime_error("export: write failed for sqs_series.csv");
  }
}

}  // namespace sigsim
