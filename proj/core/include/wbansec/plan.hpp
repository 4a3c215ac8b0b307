#pragma once

#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "wbansec/errors.hpp"
#include "wbansec/simulator.hpp"

namespace wbansec {

// A cross-product experiment matrix: every (scheme, strategy, posture, rate)
// cell is simulated `repetitions` times, each repetition with its own seed
// (base_seed + repetition index), and the repetitions are aggregated into one
// row of means and confidence half-widths.  Cells share the seed set, so rows
// are comparable pairwise on identical randomness.
struct ExperimentPlan {
  std::vector<AuthMode> schemes{AuthMode::None, AuthMode::Banzkp, AuthMode::BanGzkp};
  std::vector<StrategyKind> strategies{std::begin(all_strategies()), std::end(all_strategies())};
  std::vector<Posture> postures{std::begin(all_postures()), std::end(all_postures())};
  std::vector<double> rates_pps{1.0, 5.0, 10.0};
  int repetitions = 200;
  std::uint64_t base_seed = 1;
  double duration_s = 30.0;

  // Throws InvalidPlan unless every axis is non-empty and free of duplicates,
  // every rate is positive and finite, the duration is positive, and
  // repetitions >= 2 (a confidence half-width needs at least one degree of
  // freedom).
  void validate() const;

  // Deduplicates and orders every axis canonically (enum order, ascending
  // rates) so that cell enumeration — and therefore the output row order —
  // never depends on how the plan was written down.
  void normalize();

  std::size_t cell_count() const;
};

// Plan files are plain text: '#' comments, blank lines, `[section]` headers
// and `key = value` lines.  The first section must be `[cell-defaults]`; any
// later section simply re-assigns keys on top of it (last assignment wins).
// Keys: schemes, strategies, postures (comma-separated name lists or `all`),
// rates_pps (comma-separated numbers), repetitions, base_seed, duration_s.
// Unknown keys, unknown names, or malformed values throw InvalidPlan.
ExperimentPlan parse_plan_text(const std::string& text);
ExperimentPlan parse_plan_file(const std::string& path);  // MissingTrace is
                                                          // never thrown here;
                                                          // unreadable file =>
                                                          // InvalidPlan

// One aggregated cell: means with 95% two-tailed confidence half-widths
// (beta = t(0.05, R-1) * S / sqrt(R)) for the three plotted metrics.
struct AggregateRow {
  AuthMode scheme = AuthMode::None;
  StrategyKind strategy = StrategyKind::FloodToSink;
  Posture posture = Posture::Walk;
  double rate_pps = 1.0;
  int repetitions = 0;

  double ratio_mean = 0.0;
  double ratio_beta = 0.0;
  double delay_ms_mean = 0.0;
  double delay_ms_beta = 0.0;
  double transmissions_mean = 0.0;
  double transmissions_beta = 0.0;
};

// Aggregation is a pure fold over the per-run metrics: permuting the runs
// changes neither the means nor the half-widths.  Requires >= 2 runs.
AggregateRow aggregate_cell(AuthMode scheme, StrategyKind strategy, Posture posture,
                            double rate_pps, const std::vector<RunMetrics>& runs);

// Aggregate CSV: the per-run identifier columns, then each metric's mean
// immediately followed by its half-width.
std::string aggregate_csv_header();
std::string aggregate_csv_row(const AggregateRow& row);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);

// Trace lookup for plan runs.  A posture's table lives in
// `<dir>/<posture name>.csv` (plus the `.meta` sidecar).  The directory is
// the explicit argument when non-empty, otherwise $WBANSEC_TRACE_DIR,
// otherwise "traces".  A missing or unloadable file throws MissingTrace.
std::string resolve_trace_dir(const std::string& explicit_dir = "");
std::string trace_file_name(Posture posture);
LinkTrace load_posture_trace(Posture posture, const std::string& dir);

// Runs the whole matrix.  Rows come back sorted by cell key (scheme,
// strategy, posture, rate).  `jobs` > 1 runs cells on that many threads;
// results are identical regardless of scheduling.  When `runs_csv` is
// non-null it receives the per-run CSV (header plus one line per simulation,
// in cell order then seed order).  Throws InvalidPlan or MissingTrace.
std::vector<AggregateRow> run_plan(const ExperimentPlan& plan,
                                   const std::string& trace_dir = "", int jobs = 1,
                                   std::string* runs_csv = nullptr);

}  // namespace wbansec
