#pragma once

// Re-running the moment pipeline over a grid of bin sizes and comparing the
// resulting seasonal curves at shared bin limits.

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "intraday/binning.hpp"
#include "intraday/moments.hpp"

namespace intraday {

struct PipelineOptions {
  ExclusionPolicy policy = ExclusionPolicy::exclude;
  std::optional<int> relative_anchor_seconds;
  KurtosisMode kurtosis = KurtosisMode::with_skew_term;
  Execution exec = Execution::parallel;
};

struct CurveKey {
  ObservableKind kind;
  Statistic statistic;
  Aggregation aggregation;
  auto operator<=>(const CurveKey&) const = default;
};

/// Everything the single-T pipeline produces for one bin size.
struct BinSizeRun {
  int bin_seconds = 0;
  std::vector<Millis> bin_limits;
  std::size_t excluded_stock_days = 0;
  std::map<CurveKey, SeasonalCurve> curves;

  const SeasonalCurve& curve(ObservableKind kind, Statistic stat, Aggregation agg) const;
};

/// Builds the panel for `spec`, derives each requested observable and emits
/// the stock-average and time-average curves.
BinSizeRun run_pipeline(const TickStore& store, const SessionSpec& spec, std::span<const ObservableKind> kinds,
                        const PipelineOptions& options = {});

struct SweepResult {
  std::vector<BinSizeRun> runs;  // ascending bin size
  int relative_anchor_seconds = 0;

  const BinSizeRun& run(int bin_seconds) const;
  /// Bin limits present in both grids.
  std::vector<Millis> shared_limits(int t_a, int t_b) const;
};

/// Runs the pipeline once per bin size. Every bin size is validated before any
/// computation (UsageError). Unless the options pin it, the relative-price
/// anchor is the smallest bin size, so relative prices share one base across
/// the grid.
SweepResult run_sweep(const TickStore& store, const SessionSpec& base, std::span<const int> bin_sizes,
                      std::span<const ObservableKind> kinds, PipelineOptions options = {});

struct OverlapScore {
  ObservableKind kind = ObservableKind::returns;
  Statistic statistic = Statistic::volatility;
  Aggregation aggregation = Aggregation::time_average;
  int t_a = 0;
  int t_b = 0;
  double max_rel_dev = 0.0;
  double mean_rel_dev = 0.0;
  std::size_t compared = 0;
  std::size_t skipped = 0;  // both values under the floor, or one missing
};

/// Relative deviation |a - b| / max(|a|, |b|) at shared limits. Points where
/// both magnitudes are below `floor` or either curve is missing are skipped.
/// Throws DataError when nothing can be compared.
OverlapScore overlap_score(const SweepResult& sweep, ObservableKind kind, Statistic stat, int t_a, int t_b,
                           Aggregation agg = Aggregation::time_average, double floor = 1e-8);

struct KurtosisSummary {
  int bin_seconds = 0;
  std::optional<double> mean_kurtosis;
  std::size_t bins_used = 0;
};

/// Mean of the kurtosis curve over bins whose time lies in the central half
/// of the session, one row per bin size.
std::vector<KurtosisSummary> kurtosis_vs_binsize(const SweepResult& sweep, ObservableKind kind = ObservableKind::returns,
                                                 Aggregation agg = Aggregation::time_average);

/// CSV `T_seconds,bin_limit,kind,statistic,aggregation,value`.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
/// CSV `kind,statistic,T_a,T_b,max_rel_dev,mean_rel_dev`.
void write_overlap_csv(std::ostream& out, std::span<const OverlapScore> scores);
/// CSV `T_seconds,mean_kurtosis,bins_used`.
void write_kurtosis_summary_csv(std::ostream& out, std::span<const KurtosisSummary> rows);

}  // namespace intraday
