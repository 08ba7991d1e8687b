#pragma once

// Homogeneous bin-price panel P(stock, day, bin) built from asynchronous ticks.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "intraday/market_data.hpp"
#include "intraday/parallel.hpp"

namespace intraday {

/// What to do with a stock-day that has no tick before the first bin limit.
enum class ExclusionPolicy { exclude, error };

struct BinningOptions {
  ExclusionPolicy policy = ExclusionPolicy::exclude;
  /// Seconds after the open at which the relative-price base is sampled
  /// (last tick strictly before open + anchor). Defaults to the bin size, so
  /// the base is the first bin price. Bin-size sweeps pin it to a common value
  /// so that relative prices at shared bin limits are identical across T.
  std::optional<int> relative_anchor_seconds;
};

/// Read-only rows x K window into a panel. Rows are stocks (day view) or days
/// (stock view); `row_included(r)` is false for masked stock-days, whose
/// entries are NaN rather than zero-filled.
class PanelView {
 public:
  PanelView(const double* data, std::size_t rows, std::size_t cols, std::size_t row_stride,
            std::vector<unsigned char> included)
      : data_(data), rows_(rows), cols_(cols), row_stride_(row_stride), included_(std::move(included)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * row_stride_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_ + r * row_stride_, cols_}; }
  bool row_included(std::size_t r) const { return included_[r] != 0; }

 private:
  const double* data_;
  std::size_t rows_;
  std::size_t cols_;
  std::size_t row_stride_;
  std::vector<unsigned char> included_;
};

class PricePanel {
 public:
  PricePanel(std::vector<std::string> symbols, std::vector<Date> dates, std::vector<Millis> bin_limits,
             std::vector<double> prices, std::vector<double> base_prices,
             std::vector<unsigned char> included, int bin_seconds, Millis anchor);

  std::size_t stock_count() const { return symbols_.size(); }
  std::size_t day_count() const { return dates_.size(); }
  std::size_t bin_count() const { return bin_limits_.size(); }
  int bin_seconds() const { return bin_seconds_; }

  std::span<const std::string> symbols() const { return symbols_; }
  std::span<const Date> dates() const { return dates_; }
  std::span<const Millis> bin_limits() const { return bin_limits_; }
  /// Time of day at which the relative-price base is sampled.
  Millis relative_anchor() const { return anchor_; }

  bool included(std::size_t stock, std::size_t day) const { return included_[stock * dates_.size() + day] != 0; }
  std::size_t included_count() const;
  std::size_t excluded_count() const { return included_.size() - included_count(); }

  /// Bin price of `stock` on `day` at bin k (0-based). NaN for masked stock-days.
  double price(std::size_t stock, std::size_t day, std::size_t k) const {
    return prices_[(stock * dates_.size() + day) * bin_limits_.size() + k];
  }
  /// All K bin prices of one stock-day.
  std::span<const double> series(std::size_t stock, std::size_t day) const {
    return std::span<const double>(prices_).subspan((stock * dates_.size() + day) * bin_limits_.size(),
                                                    bin_limits_.size());
  }
  /// Relative-price base of one stock-day.
  double base_price(std::size_t stock, std::size_t day) const { return base_[stock * dates_.size() + day]; }

  /// N x K matrix of one day (rows are stocks). Throws UsageError if out of range.
  PanelView day_view(std::size_t day) const;
  /// D x K matrix of one stock (rows are days). Throws UsageError if out of range.
  PanelView stock_view(std::size_t stock) const;

 private:
  std::vector<std::string> symbols_;
  std::vector<Date> dates_;
  std::vector<Millis> bin_limits_;
  std::vector<double> prices_;  // (stock, day, bin), bin fastest
  std::vector<double> base_;
  std::vector<unsigned char> included_;
  int bin_seconds_;
  Millis anchor_;
};

/// Samples the last price strictly before each limit. Returns false when no
/// tick precedes the first limit. `limits` must be increasing.
bool sample_last_before(std::span<const Tick> ticks, std::span<const Millis> limits, std::span<double> out);

/// Builds the panel: P(k) is the last tick strictly before bin limit k,
/// carried forward through empty bins. Days come from `spec.dates` when given
/// (ticks on other dates are a DataError), otherwise from the store. Throws
/// DataError when every stock-day is excluded.
PricePanel build_panel(const TickStore& store, const SessionSpec& spec, const BinningOptions& options = {},
                       Execution exec = Execution::parallel);

/// Long-format CSV `symbol,date,bin_index,bin_limit,price`, masked stock-days omitted.
void write_panel_csv(std::ostream& out, const PricePanel& panel);

}  // namespace intraday
