#pragma once

// Single-stock (over days) and cross-sectional (over stocks) moment grids and
// the seasonal curves obtained by averaging them.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intraday/observables.hpp"
#include "intraday/parallel.hpp"
#include "intraday/robust.hpp"

namespace intraday {

enum class Statistic { mean, volatility, skewness, kurtosis, median, abs_mean };

std::string_view to_string(Statistic stat);
std::optional<Statistic> parse_statistic(std::string_view name);
/// Reads one statistic out of a moment cell; abs_mean is |mean|.
double statistic_value(const RobustMoments& m, Statistic stat);

enum class Aggregation { stock_average, time_average };
std::string_view to_string(Aggregation agg);

/// Moments over days for each (stock, bin). Cells with fewer than 2 included
/// days or zero dispersion are missing.
class SingleStockMoments {
 public:
  SingleStockMoments(std::vector<std::string> symbols, std::vector<Millis> bin_times,
                     std::vector<std::optional<RobustMoments>> cells, std::vector<std::size_t> counts);

  std::size_t stock_count() const { return symbols_.size(); }
  std::size_t bin_count() const { return bin_times_.size(); }
  std::span<const std::string> symbols() const { return symbols_; }
  std::span<const Millis> bin_times() const { return bin_times_; }

  const std::optional<RobustMoments>& cell(std::size_t stock, std::size_t k) const {
    return cells_[stock * bin_times_.size() + k];
  }
  /// Number of included days behind the cell.
  std::size_t count(std::size_t stock, std::size_t k) const { return counts_[stock * bin_times_.size() + k]; }

 private:
  std::vector<std::string> symbols_;
  std::vector<Millis> bin_times_;
  std::vector<std::optional<RobustMoments>> cells_;
  std::vector<std::size_t> counts_;
};

/// Moments over stocks for each (bin, day).
class CrossSectionMoments {
 public:
  CrossSectionMoments(std::vector<Date> dates, std::vector<Millis> bin_times,
                      std::vector<std::optional<RobustMoments>> cells, std::vector<std::size_t> counts);

  std::size_t day_count() const { return dates_.size(); }
  std::size_t bin_count() const { return bin_times_.size(); }
  std::span<const Date> dates() const { return dates_; }
  std::span<const Millis> bin_times() const { return bin_times_; }

  const std::optional<RobustMoments>& cell(std::size_t k, std::size_t day) const {
    return cells_[k * dates_.size() + day];
  }
  /// Number of included stocks behind the cell.
  std::size_t count(std::size_t k, std::size_t day) const { return counts_[k * dates_.size() + day]; }

 private:
  std::vector<Date> dates_;
  std::vector<Millis> bin_times_;
  std::vector<std::optional<RobustMoments>> cells_;
  std::vector<std::size_t> counts_;
};

SingleStockMoments single_stock_moments(const ObservablePanel& obs,
                                        KurtosisMode mode = KurtosisMode::with_skew_term,
                                        Execution exec = Execution::parallel);

/// The kurtosis deviation term is taken about the cross-sectional mean of the
/// same (bin, day).
CrossSectionMoments cross_section_moments(const ObservablePanel& obs,
                                          KurtosisMode mode = KurtosisMode::with_skew_term,
                                          Execution exec = Execution::parallel);

/// One statistic averaged per bin over stocks ([.]) or days (<.>). Missing
/// cells are skipped; `counts[k]` records how many cells entered bin k and a
/// bin with none is missing.
struct SeasonalCurve {
  Statistic statistic = Statistic::mean;
  Aggregation aggregation = Aggregation::stock_average;
  std::vector<Millis> bin_times;
  std::vector<std::optional<double>> values;
  std::vector<std::size_t> counts;

  std::string label() const;
  std::size_t size() const { return values.size(); }
};

/// [mu], [sigma], [zeta], [kappa] over stocks.
std::vector<SeasonalCurve> stock_average(const SingleStockMoments& m);
/// <mu_d>, <sigma_d>, <zeta_d>, <kappa_d> and <|mu_d|> over days.
std::vector<SeasonalCurve> time_average(const CrossSectionMoments& m);

SeasonalCurve stock_average(const SingleStockMoments& m, Statistic stat);
SeasonalCurve time_average(const CrossSectionMoments& m, Statistic stat);

struct VolatilityProxies {
  SeasonalCurve stock_volatility;  // [sigma_alpha(k)]
  SeasonalCurve dispersion;        // <sigma_d(k, t)>
  SeasonalCurve index_abs_mean;    // <|mu_d(k, t)|>
};

VolatilityProxies volatility_proxies(const ObservablePanel& obs, KurtosisMode mode = KurtosisMode::with_skew_term,
                                     Execution exec = Execution::parallel);

/// CSV `bin_index,bin_time,statistic,aggregation,value,count`; missing values
/// are empty cells.
void write_curves_csv(std::ostream& out, std::span<const SeasonalCurve> curves);
/// Un-averaged per-stock paths: `symbol,bin_index,bin_time,statistic,value,count`.
void write_single_stock_csv(std::ostream& out, const SingleStockMoments& m);
/// Un-averaged per-day paths: `date,bin_index,bin_time,statistic,value,count`.
void write_cross_section_csv(std::ostream& out, const CrossSectionMoments& m);

}  // namespace intraday
