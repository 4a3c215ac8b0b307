#include "wbansec/plan.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "wbansec/stats.hpp"

namespace wbansec {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw InvalidPlan("trailing junk");
    return v;
  } catch (const InvalidPlan&) {
    throw InvalidPlan("plan key '" + key + "': malformed number '" + text + "'");
  } catch (const std::exception&) {
    throw InvalidPlan("plan key '" + key + "': malformed number '" + text + "'");
  }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw InvalidPlan("trailing junk");
    return static_cast<std::uint64_t>(v);
  } catch (const InvalidPlan&) {
    throw InvalidPlan("plan key '" + key + "': malformed integer '" + text + "'");
  } catch (const std::exception&) {
    throw InvalidPlan("plan key '" + key + "': malformed integer '" + text + "'");
  }
}

template <typename T, typename Parse, typename All>
std::vector<T> parse_name_list(const std::string& key, const std::string& value, Parse parse,
                               const All& everything) {
  if (trim(value) == "all") return std::vector<T>(std::begin(everything), std::end(everything));
  std::vector<T> out;
  for (const std::string& item : split_list(value)) {
    const auto parsed = parse(item);
    if (!parsed) throw InvalidPlan("plan key '" + key + "': unknown name '" + item + "'");
    out.push_back(*parsed);
  }
  return out;
}

void assign_key(ExperimentPlan& plan, const std::string& key, const std::string& value) {
  if (key == "schemes") {
    plan.schemes = parse_name_list<AuthMode>(key, value, parse_auth_mode, all_auth_modes());
  } else if (key == "strategies") {
    plan.strategies = parse_name_list<StrategyKind>(key, value, parse_strategy, all_strategies());
  } else if (key == "postures") {
    plan.postures = parse_name_list<Posture>(key, value, parse_posture, all_postures());
  } else if (key == "rates_pps") {
    plan.rates_pps.clear();
    for (const std::string& item : split_list(value)) {
      plan.rates_pps.push_back(parse_number(key, item));
    }
  } else if (key == "repetitions") {
    plan.repetitions = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "base_seed") {
    plan.base_seed = parse_unsigned(key, value);
  } else if (key == "duration_s") {
    plan.duration_s = parse_number(key, value);
  } else {
    throw InvalidPlan("unknown plan key '" + key + "'");
  }
}

template <typename T>
void dedupe_sorted(std::vector<T>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

template <typename T>
bool has_duplicates(const std::vector<T>& xs) {
  std::vector<T> copy = xs;
  std::sort(copy.begin(), copy.end());
  return std::adjacent_find(copy.begin(), copy.end()) != copy.end();
}

struct Cell {
  AuthMode scheme;
  StrategyKind strategy;
  Posture posture;
  double rate_pps;
};

std::vector<Cell> enumerate_cells(const ExperimentPlan& plan) {
  std::vector<Cell> cells;
  cells.reserve(plan.cell_count());
  for (AuthMode scheme : plan.schemes)
    for (StrategyKind strategy : plan.strategies)
      for (Posture posture : plan.postures)
        for (double rate : plan.rates_pps) cells.push_back({scheme, strategy, posture, rate});
  return cells;
}

SimConfig cell_config(const ExperimentPlan& plan, const Cell& cell, int repetition) {
  SimConfig cfg;
  cfg.scheme = cell.scheme;
  cfg.strategy = cell.strategy;
  cfg.posture = cell.posture;
  cfg.rate_pps = cell.rate_pps;
  cfg.duration_s = plan.duration_s;
  cfg.seed = plan.base_seed + static_cast<std::uint64_t>(repetition);
  return cfg;
}

}  // namespace

void ExperimentPlan::validate() const {
  if (schemes.empty() || strategies.empty() || postures.empty() || rates_pps.empty()) {
    throw InvalidPlan("every plan axis must be non-empty");
  }
  if (has_duplicates(schemes) || has_duplicates(strategies) || has_duplicates(postures) ||
      has_duplicates(rates_pps)) {
    throw InvalidPlan("plan axes must not repeat values");
  }
  for (double rate : rates_pps) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      throw InvalidPlan("packet rates must be positive and finite");
    }
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidPlan("duration must be positive");
  }
  if (repetitions < 2) {
    throw InvalidPlan("a confidence half-width needs at least 2 repetitions");
  }
}

void ExperimentPlan::normalize() {
  dedupe_sorted(schemes);
  dedupe_sorted(strategies);
  dedupe_sorted(postures);
  dedupe_sorted(rates_pps);
}

std::size_t ExperimentPlan::cell_count() const {
  return schemes.size() * strategies.size() * postures.size() * rates_pps.size();
}

ExperimentPlan parse_plan_text(const std::string& text) {
  ExperimentPlan plan;
  bool saw_defaults = false;
  bool in_section = false;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InvalidPlan("line " + std::to_string(line_no) + ": unterminated section header");
      }
      const std::string section = trim(line.substr(1, line.size() - 2));
      if (!saw_defaults) {
        if (section != "cell-defaults") {
          throw InvalidPlan("plan must open with a [cell-defaults] section, got [" + section + "]");
        }
        saw_defaults = true;
      }
      in_section = true;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidPlan("line " + std::to_string(line_no) + ": expected key = value");
    }
    if (!in_section) {
      throw InvalidPlan("line " + std::to_string(line_no) + ": assignment outside any section");
    }
    assign_key(plan, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  if (!saw_defaults) throw InvalidPlan("plan has no [cell-defaults] section");
  plan.normalize();
  plan.validate();
  return plan;
}

ExperimentPlan parse_plan_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidPlan("cannot read plan file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_plan_text(buffer.str());
}

AggregateRow aggregate_cell(AuthMode scheme, StrategyKind strategy, Posture posture,
                            double rate_pps, const std::vector<RunMetrics>& runs) {
  if (runs.size() < 2) throw InvalidPlan("aggregation needs at least 2 runs");
  std::vector<double> ratios, delays, transmissions;
  ratios.reserve(runs.size());
  delays.reserve(runs.size());
  transmissions.reserve(runs.size());
  for (const RunMetrics& m : runs) {
    ratios.push_back(m.ratio());
    delays.push_back(m.avg_delay_ms());
    transmissions.push_back(static_cast<double>(m.total_transmissions));
  }
  AggregateRow row;
  row.scheme = scheme;
  row.strategy = strategy;
  row.posture = posture;
  row.rate_pps = rate_pps;
  row.repetitions = static_cast<int>(runs.size());
  row.ratio_mean = sample_stats(ratios).mean;
  row.ratio_beta = confidence_beta(ratios);
  row.delay_ms_mean = sample_stats(delays).mean;
  row.delay_ms_beta = confidence_beta(delays);
  row.transmissions_mean = sample_stats(transmissions).mean;
  row.transmissions_beta = confidence_beta(transmissions);
  return row;
}

std::string aggregate_csv_header() {
  return "scheme,strategy,posture,rate_pps,repetitions,ratio_mean,ratio_beta,"
         "avg_delay_ms_mean,avg_delay_ms_beta,transmissions_mean,transmissions_beta";
}

std::string aggregate_csv_row(const AggregateRow& row) {
  char buf[320];
  std::snprintf(buf, sizeof(buf), "%s,%s,%s,%g,%d,%.6f,%.6f,%.3f,%.3f,%.3f,%.3f",
                auth_mode_name(row.scheme), strategy_name(row.strategy),
                posture_name(row.posture), row.rate_pps, row.repetitions, row.ratio_mean,
                row.ratio_beta, row.delay_ms_mean, row.delay_ms_beta, row.transmissions_mean,
                row.transmissions_beta);
  return buf;
}

std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = aggregate_csv_header();
  out.push_back('\n');
  for (const AggregateRow& row : rows) {
    out += aggregate_csv_row(row);
    out.push_back('\n');
  }
  return out;
}

std::string resolve_trace_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("WBANSEC_TRACE_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "traces";
}

std::string trace_file_name(Posture posture) {
  return std::string(posture_name(posture)) + ".csv";
}

LinkTrace load_posture_trace(Posture posture, const std::string& dir) {
  const std::string path = dir + "/" + trace_file_name(posture);
  LinkTrace trace = LinkTrace::load_csv(path);
  if (trace.posture() != posture) {
    throw MissingTrace(path + ": file holds posture '" + posture_name(trace.posture()) +
                       "', expected '" + posture_name(posture) + "'");
  }
  trace.validate();
  return trace;
}

std::vector<AggregateRow> run_plan(const ExperimentPlan& plan_in, const std::string& trace_dir,
                                   int jobs, std::string* runs_csv) {
  ExperimentPlan plan = plan_in;
  plan.normalize();
  plan.validate();

  const std::string dir = resolve_trace_dir(trace_dir);
  std::map<Posture, LinkTrace> traces;
  for (Posture posture : plan.postures) {
    traces.emplace(posture, load_posture_trace(posture, dir));
  }

  const std::vector<Cell> cells = enumerate_cells(plan);
  std::vector<std::vector<RunMetrics>> results(cells.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        const Cell& cell = cells[i];
        const LinkTrace& trace = traces.at(cell.posture);
        std::vector<RunMetrics> runs;
        runs.reserve(static_cast<std::size_t>(plan.repetitions));
        for (int r = 0; r < plan.repetitions; ++r) {
          runs.push_back(run_simulation(cell_config(plan, cells[i], r), trace));
        }
        results[i] = std::move(runs);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<AggregateRow> rows;
  rows.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    rows.push_back(aggregate_cell(cells[i].scheme, cells[i].strategy, cells[i].posture,
                                  cells[i].rate_pps, results[i]));
  }

  if (runs_csv != nullptr) {
    std::string out = metrics_csv_header();
    out.push_back('\n');
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (int r = 0; r < plan.repetitions; ++r) {
        out += metrics_csv_row(cell_config(plan, cells[i], r),
                               results[i][static_cast<std::size_t>(r)]);
        out.push_back('\n');
      }
    }
    *runs_csv = std::move(out);
  }
  return rows;
}

}  // namespace wbansec
