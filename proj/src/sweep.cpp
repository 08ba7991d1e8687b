#include "intraday/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "intraday/csv_format.hpp"
#include "intraday/error.hpp"

namespace intraday {

const SeasonalCurve& BinSizeRun::curve(ObservableKind kind, Statistic stat, Aggregation agg) const {
  auto it = curves.find(CurveKey{kind, stat, agg});
  if (it == curves.end()) {
    throw UsageError("no " + std::string(to_string(agg)) + " " + std::string(to_string(stat)) + " curve for " +
                     std::string(to_string(kind)) + " at T=" + std::to_string(bin_seconds) + " s");
  }
  return it->second;
}

BinSizeRun run_pipeline(const TickStore& store, const SessionSpec& spec, std::span<const ObservableKind> kinds,
                        const PipelineOptions& options) {
  const PricePanel panel =
      build_panel(store, spec, BinningOptions{options.policy, options.relative_anchor_seconds}, options.exec);
  BinSizeRun run;
  run.bin_seconds = spec.bin_seconds;
  run.bin_limits.assign(panel.bin_limits().begin(), panel.bin_limits().end());
  run.excluded_stock_days = panel.excluded_count();
  for (const auto kind : kinds) {
    ObservablePanel obs = [&] {
      switch (kind) {
        case ObservableKind::returns: return compute_returns(panel);
        case ObservableKind::relative_prices: return compute_relative_prices(panel);
        case ObservableKind::normalized_returns: break;
      }
      throw UsageError("sweeps support returns and relative prices only");
    }();
    const auto single = single_stock_moments(obs, options.kurtosis, options.exec);
    const auto cross = cross_section_moments(obs, options.kurtosis, options.exec);
    for (auto& c : stock_average(single)) run.curves.emplace(CurveKey{kind, c.statistic, c.aggregation}, std::move(c));
    for (auto& c : time_average(cross)) run.curves.emplace(CurveKey{kind, c.statistic, c.aggregation}, std::move(c));
  }
  return run;
}

const BinSizeRun& SweepResult::run(int bin_seconds) const {
  for (const auto& r : runs)
    if (r.bin_seconds == bin_seconds) return r;
  throw UsageError("bin size " + std::to_string(bin_seconds) + " s is not part of the sweep");
}

std::vector<Millis> SweepResult::shared_limits(int t_a, int t_b) const {
  const auto& a = run(t_a).bin_limits;
  const auto& b = run(t_b).bin_limits;
  std::vector<Millis> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SweepResult run_sweep(const TickStore& store, const SessionSpec& base, std::span<const int> bin_sizes,
                      std::span<const ObservableKind> kinds, PipelineOptions options) {
  if (bin_sizes.empty()) throw UsageError("bin-size grid is empty");
  std::vector<int> grid(bin_sizes.begin(), bin_sizes.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (const int t : grid) {
    SessionSpec spec = base;
    spec.bin_seconds = t;
    spec.validate();
  }
  SweepResult result;
  result.relative_anchor_seconds = options.relative_anchor_seconds.value_or(grid.front());
  options.relative_anchor_seconds = result.relative_anchor_seconds;
  for (const int t : grid) {
    SessionSpec spec = base;
    spec.bin_seconds = t;
    result.runs.push_back(run_pipeline(store, spec, kinds, options));
  }
  return result;
}

OverlapScore overlap_score(const SweepResult& sweep, ObservableKind kind, Statistic stat, int t_a, int t_b,
                           Aggregation agg, double floor) {
  const auto& ca = sweep.run(t_a).curve(kind, stat, agg);
  const auto& cb = sweep.run(t_b).curve(kind, stat, agg);
  OverlapScore score{kind, stat, agg, t_a, t_b, 0.0, 0.0, 0, 0};
  double sum = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    while (j < cb.size() && cb.bin_times[j] < ca.bin_times[i]) ++j;
    if (j == cb.size() || cb.bin_times[j] != ca.bin_times[i]) continue;
    const auto& va = ca.values[i];
    const auto& vb = cb.values[j];
    if (!va || !vb || (std::abs(*va) < floor && std::abs(*vb) < floor)) {
      ++score.skipped;
      continue;
    }
    const double dev = std::abs(*va - *vb) / std::max(std::abs(*va), std::abs(*vb));
    score.max_rel_dev = std::max(score.max_rel_dev, dev);
    sum += dev;
    ++score.compared;
  }
  if (score.compared == 0) {
    throw DataError("no comparable shared bin limits between T=" + std::to_string(t_a) + " s and T=" +
                    std::to_string(t_b) + " s");
  }
  score.mean_rel_dev = sum / static_cast<double>(score.compared);
  return score;
}

std::vector<KurtosisSummary> kurtosis_vs_binsize(const SweepResult& sweep, ObservableKind kind, Aggregation agg) {
  std::vector<KurtosisSummary> rows;
  for (const auto& run : sweep.runs) {
    const auto& curve = run.curve(kind, Statistic::kurtosis, agg);
    const Millis close = run.bin_limits.back();
    const Millis open = run.bin_limits.front() - static_cast<Millis>(run.bin_seconds) * kMillisPerSecond;
    const Millis quarter = (close - open) / 4;
    KurtosisSummary row{run.bin_seconds, std::nullopt, 0};
    double sum = 0.0;
    for (std::size_t k = 0; k < curve.size(); ++k) {
      if (curve.bin_times[k] < open + quarter || curve.bin_times[k] > close - quarter || !curve.values[k]) continue;
      sum += *curve.values[k];
      ++row.bins_used;
    }
    if (row.bins_used > 0) row.mean_kurtosis = sum / static_cast<double>(row.bins_used);
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "T_seconds,bin_limit,kind,statistic,aggregation,value\n";
  std::string line;
  for (const auto& run : sweep.runs) {
    for (const auto& [key, curve] : run.curves) {
      for (std::size_t k = 0; k < curve.size(); ++k) {
        line = std::to_string(run.bin_seconds) + "," + format_time_of_day(curve.bin_times[k]) + ",";
        line += to_string(key.kind);
        line.push_back(',');
        line += to_string(key.statistic);
        line.push_back(',');
        line += to_string(key.aggregation);
        line.push_back(',');
        append_optional(line, curve.values[k]);
        line.push_back('\n');
        out << line;
      }
    }
  }
}

void write_overlap_csv(std::ostream& out, std::span<const OverlapScore> scores) {
  out << "kind,statistic,T_a,T_b,max_rel_dev,mean_rel_dev\n";
  std::string line;
  for (const auto& s : scores) {
    line = std::string(to_string(s.kind)) + "," + std::string(to_string(s.statistic)) + "," + std::to_string(s.t_a) +
           "," + std::to_string(s.t_b) + ",";
    append_number(line, s.max_rel_dev);
    line.push_back(',');
    append_number(line, s.mean_rel_dev);
    line.push_back('\n');
    out << line;
  }
}

void write_kurtosis_summary_csv(std::ostream& out, std::span<const KurtosisSummary> rows) {
  out << "T_seconds,mean_kurtosis,bins_used\n";
  std::string line;
  for (const auto& r : rows) {
    line = std::to_string(r.bin_seconds) + ",";
    append_optional(line, r.mean_kurtosis);
    line += "," + std::to_string(r.bins_used) + "\n";
    out << line;
  }
}

}  // namespace intraday
