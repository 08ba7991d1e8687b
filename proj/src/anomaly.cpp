#include "intraday/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>

#include "intraday/csv_format.hpp"
#include "intraday/error.hpp"

namespace intraday {

std::string_view to_string(EntityKind kind) { return kind == EntityKind::day ? "day" : "stock"; }

std::size_t AnomalyReport::top() const {
  for (const auto& s : scores)
    if (s.rank == 1) return s.entity;
  return 0;
}

namespace {

using Lookup = std::function<std::optional<double>(std::size_t entity, std::size_t bin, Statistic stat)>;

// values[(e * bins) + k] for one statistic, NaN where missing.
std::vector<double> tabulate(std::size_t entities, std::size_t bins, Statistic stat, const Lookup& lookup) {
  std::vector<double> table(entities * bins, std::nan(""));
  for (std::size_t e = 0; e < entities; ++e)
    for (std::size_t k = 0; k < bins; ++k)
      if (auto v = lookup(e, k, stat)) table[e * bins + k] = *v;
  return table;
}

// Ranks 1..n by descending score; missing scores go last, ties by entity index.
std::vector<std::size_t> rank_descending(const std::vector<std::optional<double>>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a].has_value() != scores[b].has_value()) return scores[a].has_value();
    return scores[a] && *scores[a] > *scores[b];
  });
  std::vector<std::size_t> rank(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i + 1;
  return rank;
}

std::vector<EntityScore> score_entities(std::size_t entities, std::size_t bins, std::span<const Statistic> stats,
                                        const Lookup& lookup) {
  std::vector<EntityScore> out(entities);
  std::vector<std::vector<double>> tables;
  for (const auto stat : stats) tables.push_back(tabulate(entities, bins, stat, lookup));
  std::vector<double> others;
  for (std::size_t e = 0; e < entities; ++e) {
    auto& score = out[e];
    score.entity = e;
    score.per_statistic.assign(stats.size(), std::nullopt);
    score.skipped_bins.assign(stats.size(), 0);
    for (std::size_t s = 0; s < stats.size(); ++s) {
      double sum_sq = 0.0;
      std::size_t used = 0;
      const auto& table = tables[s];
      for (std::size_t k = 0; k < bins; ++k) {
        const double own = table[e * bins + k];
        others.clear();
        for (std::size_t o = 0; o < entities; ++o) {
          const double v = table[o * bins + k];
          if (o != e && !std::isnan(v)) others.push_back(v);
        }
        if (std::isnan(own) || others.size() < 2) {
          ++score.skipped_bins[s];
          continue;
        }
        double ref = 0.0;
        for (const double v : others) ref += v;
        ref /= static_cast<double>(others.size());
        double var = 0.0;
        for (const double v : others) var += (v - ref) * (v - ref);
        const double spread = std::sqrt(var / static_cast<double>(others.size()));
        if (!(spread > 0.0)) {
          ++score.skipped_bins[s];
          continue;
        }
        const double z = (own - ref) / spread;
        sum_sq += z * z;
        ++used;
      }
      if (used > 0) score.per_statistic[s] = std::sqrt(sum_sq / static_cast<double>(used));
    }
    double total = 0.0;
    std::size_t available = 0;
    for (const auto& v : score.per_statistic) {
      if (v) {
        total += *v;
        ++available;
      }
    }
    if (available > 0) score.combined = total / static_cast<double>(available);
  }

  std::vector<std::optional<double>> combined(entities);
  for (std::size_t e = 0; e < entities; ++e) combined[e] = out[e].combined;
  const auto ranks = rank_descending(combined);
  for (std::size_t e = 0; e < entities; ++e) {
    out[e].rank = ranks[e];
    out[e].statistic_ranks.resize(stats.size());
  }
  for (std::size_t s = 0; s < stats.size(); ++s) {
    std::vector<std::optional<double>> column(entities);
    for (std::size_t e = 0; e < entities; ++e) column[e] = out[e].per_statistic[s];
    const auto r = rank_descending(column);
    for (std::size_t e = 0; e < entities; ++e) out[e].statistic_ranks[s] = r[e];
  }
  return out;
}

}  // namespace

AnomalyReport day_scores(const CrossSectionMoments& cs, std::span<const Statistic> statistics) {
  if (cs.day_count() < 3) throw DataError("day scoring needs at least 3 days, got " + std::to_string(cs.day_count()));
  if (statistics.empty()) throw UsageError("no statistics selected");
  AnomalyReport report;
  report.kind = EntityKind::day;
  report.statistics.assign(statistics.begin(), statistics.end());
  for (const Date d : cs.dates()) report.entity_ids.push_back(format_date(d));
  report.scores = score_entities(cs.day_count(), cs.bin_count(), statistics,
                                 [&](std::size_t t, std::size_t k, Statistic s) -> std::optional<double> {
                                   const auto& c = cs.cell(k, t);
                                   if (!c) return std::nullopt;
                                   return statistic_value(*c, s);
                                 });
  return report;
}

AnomalyReport stock_scores(const SingleStockMoments& ss, std::span<const Statistic> statistics) {
  if (ss.stock_count() < 3) {
    throw DataError("stock scoring needs at least 3 stocks, got " + std::to_string(ss.stock_count()));
  }
  if (statistics.empty()) throw UsageError("no statistics selected");
  AnomalyReport report;
  report.kind = EntityKind::stock;
  report.statistics.assign(statistics.begin(), statistics.end());
  report.entity_ids.assign(ss.symbols().begin(), ss.symbols().end());
  report.scores = score_entities(ss.stock_count(), ss.bin_count(), statistics,
                                 [&](std::size_t a, std::size_t k, Statistic s) -> std::optional<double> {
                                   const auto& c = ss.cell(a, k);
                                   if (!c) return std::nullopt;
                                   return statistic_value(*c, s);
                                 });
  return report;
}

void write_anomaly_csv(std::ostream& out, const AnomalyReport& report) {
  out << "entity_kind,entity_id,statistic,score,rank\n";
  const std::string kind(to_string(report.kind));
  std::string line;
  for (const auto& score : report.scores) {
    const std::string prefix = kind + "," + report.entity_ids[score.entity] + ",";
    for (std::size_t s = 0; s < report.statistics.size(); ++s) {
      line = prefix + std::string(to_string(report.statistics[s])) + ",";
      append_optional(line, score.per_statistic[s]);
      line += "," + std::to_string(score.statistic_ranks[s]) + "\n";
      out << line;
    }
    line = prefix + "combined,";
    append_optional(line, score.combined);
    line += "," + std::to_string(score.rank) + "\n";
    out << line;
  }
}

}  // namespace intraday
