#pragma once

// Per-(stock, day, bin) observables derived from the bin-price panel.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intraday/binning.hpp"

namespace intraday {

class CrossSectionMoments;

enum class ObservableKind { returns, relative_prices, normalized_returns };

std::string_view to_string(ObservableKind kind);

/// Values indexed (stock, day, bin). Returns and normalized returns have K-1
/// bins (bin k uses prices k and k+1); relative prices have K. `bin_time(k)`
/// is the bin limit of the left price, so curves of every kind share the
/// panel's limit grid. Masked stock-days hold NaN.
class ObservablePanel {
 public:
  ObservablePanel(ObservableKind kind, std::vector<std::string> symbols, std::vector<Date> dates,
                  std::vector<Millis> bin_times, std::vector<double> values, std::vector<unsigned char> included,
                  int bin_seconds);

  ObservableKind kind() const { return kind_; }
  std::size_t stock_count() const { return symbols_.size(); }
  std::size_t day_count() const { return dates_.size(); }
  std::size_t bin_count() const { return bin_times_.size(); }
  int bin_seconds() const { return bin_seconds_; }

  std::span<const std::string> symbols() const { return symbols_; }
  std::span<const Date> dates() const { return dates_; }
  std::span<const Millis> bin_times() const { return bin_times_; }

  bool included(std::size_t stock, std::size_t day) const { return included_[stock * dates_.size() + day] != 0; }
  double value(std::size_t stock, std::size_t day, std::size_t k) const {
    return values_[(stock * dates_.size() + day) * bin_times_.size() + k];
  }
  std::span<const double> series(std::size_t stock, std::size_t day) const {
    return std::span<const double>(values_).subspan((stock * dates_.size() + day) * bin_times_.size(),
                                                    bin_times_.size());
  }

 private:
  ObservableKind kind_;
  std::vector<std::string> symbols_;
  std::vector<Date> dates_;
  std::vector<Millis> bin_times_;
  std::vector<double> values_;
  std::vector<unsigned char> included_;
  int bin_seconds_;
};

/// x(k) = (P(k+1) - P(k)) / P(k), k = 0..K-2.
ObservablePanel compute_returns(const PricePanel& panel);

/// x(k) = (P(k) - base) / base, where base is the price at the panel's
/// relative anchor (the first bin price by default, making x(0) exactly 0).
ObservablePanel compute_relative_prices(const PricePanel& panel);

/// Divides each return by the cross-sectional dispersion of its (bin, day).
/// Throws NumericError("degenerate cross-section ...") when a (bin, day) with
/// included stocks has zero or undefined dispersion.
ObservablePanel normalize_returns(const ObservablePanel& returns, const CrossSectionMoments& dispersion);

/// Long-format CSV `symbol,date,bin_index,kind,value`, masked stock-days omitted.
void write_observable_csv(std::ostream& out, const ObservablePanel& obs);

}  // namespace intraday
