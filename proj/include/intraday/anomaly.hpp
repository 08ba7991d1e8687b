#pragma once

// Deviation of each day's (or stock's) moment path from the leave-one-out
// seasonal path of the others.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intraday/moments.hpp"

namespace intraday {

enum class EntityKind { day, stock };
std::string_view to_string(EntityKind kind);

struct EntityScore {
  std::size_t entity = 0;
  std::vector<std::optional<double>> per_statistic;  // aligned with AnomalyReport::statistics
  std::vector<std::size_t> statistic_ranks;          // 1 = most anomalous; missing scores rank last
  std::vector<std::size_t> skipped_bins;             // per statistic
  std::optional<double> combined;                    // mean over the available statistics
  std::size_t rank = 0;                              // by combined score
};

using DayScore = EntityScore;
using StockScore = EntityScore;

struct AnomalyReport {
  EntityKind kind = EntityKind::day;
  std::vector<Statistic> statistics;
  std::vector<std::string> entity_ids;
  std::vector<EntityScore> scores;  // in entity order

  /// Entity index holding rank 1.
  std::size_t top() const;
};

/// For every day t and statistic s: reference and spread are the per-bin mean
/// and population standard deviation of s over the other days; the score is
/// the RMS over bins of (s(k, t) - ref(k)) / spread(k). Bins with a missing
/// value, fewer than 2 reference values or zero spread are skipped and
/// counted. Throws DataError when D < 3.
AnomalyReport day_scores(const CrossSectionMoments& cs, std::span<const Statistic> statistics);

/// Same scoring with stocks in place of days, on single-stock moment paths.
/// Throws DataError when N < 3.
AnomalyReport stock_scores(const SingleStockMoments& ss, std::span<const Statistic> statistics);

/// CSV `entity_kind,entity_id,statistic,score,rank`; one row per statistic
/// plus a `combined` row per entity.
void write_anomaly_csv(std::ostream& out, const AnomalyReport& report);

}  // namespace intraday
