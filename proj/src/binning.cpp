#include "intraday/binning.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "intraday/csv_format.hpp"
#include "intraday/error.hpp"

namespace intraday {

PricePanel::PricePanel(std::vector<std::string> symbols, std::vector<Date> dates, std::vector<Millis> bin_limits,
                       std::vector<double> prices, std::vector<double> base_prices,
                       std::vector<unsigned char> included, int bin_seconds, Millis anchor)
    : symbols_(std::move(symbols)),
      dates_(std::move(dates)),
      bin_limits_(std::move(bin_limits)),
      prices_(std::move(prices)),
      base_(std::move(base_prices)),
      included_(std::move(included)),
      bin_seconds_(bin_seconds),
      anchor_(anchor) {}

std::size_t PricePanel::included_count() const {
  return static_cast<std::size_t>(std::count(included_.begin(), included_.end(), 1));
}

PanelView PricePanel::day_view(std::size_t day) const {
  if (day >= day_count()) throw UsageError("day index " + std::to_string(day) + " out of range");
  std::vector<unsigned char> flags(stock_count());
  for (std::size_t a = 0; a < stock_count(); ++a) flags[a] = included(a, day) ? 1 : 0;
  return PanelView(prices_.data() + day * bin_count(), stock_count(), bin_count(), day_count() * bin_count(),
                   std::move(flags));
}

PanelView PricePanel::stock_view(std::size_t stock) const {
  if (stock >= stock_count()) throw UsageError("stock index " + std::to_string(stock) + " out of range");
  std::vector<unsigned char> flags(day_count());
  for (std::size_t t = 0; t < day_count(); ++t) flags[t] = included(stock, t) ? 1 : 0;
  return PanelView(prices_.data() + stock * day_count() * bin_count(), day_count(), bin_count(), bin_count(),
                   std::move(flags));
}

bool sample_last_before(std::span<const Tick> ticks, std::span<const Millis> limits, std::span<double> out) {
  std::size_t next = 0;
  for (std::size_t k = 0; k < limits.size(); ++k) {
    while (next < ticks.size() && ticks[next].time < limits[k]) ++next;
    if (next == 0) return false;
    out[k] = ticks[next - 1].price;
  }
  return true;
}

PricePanel build_panel(const TickStore& store, const SessionSpec& spec, const BinningOptions& options,
                       Execution exec) {
  spec.validate();
  const int anchor_seconds = options.relative_anchor_seconds.value_or(spec.bin_seconds);
  if (anchor_seconds <= 0 || static_cast<Millis>(anchor_seconds) * kMillisPerSecond > spec.session_length()) {
    throw UsageError("relative-price anchor must lie inside the session");
  }
  const Millis anchor = spec.open + static_cast<Millis>(anchor_seconds) * kMillisPerSecond;

  std::vector<Date> dates(store.dates().begin(), store.dates().end());
  if (!spec.dates.empty()) {
    for (const Date d : store.dates()) {
      if (!std::binary_search(spec.dates.begin(), spec.dates.end(), d)) {
        throw DataError("tick data contains date " + format_date(d) + " which is not a session date");
      }
    }
    dates = spec.dates;
  }

  const std::vector<Millis> limits = spec.bin_limits();
  const std::size_t n = store.stock_count();
  const std::size_t d = dates.size();
  const std::size_t k_count = limits.size();
  std::vector<std::optional<std::size_t>> store_day(d);
  for (std::size_t t = 0; t < d; ++t) store_day[t] = store.day_index(dates[t]);

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> prices(n * d * k_count, nan);
  std::vector<double> base(n * d, nan);
  std::vector<unsigned char> included(n * d, 0);
  const Millis anchor_limit[1] = {anchor};

  for_each_index(exec, n * d, [&](std::size_t cell) {
    const std::size_t a = cell / d;
    const std::size_t t = cell % d;
    const std::span<const Tick> ticks = store_day[t] ? store.series(a, *store_day[t]) : std::span<const Tick>{};
    std::span<double> out(prices.data() + cell * k_count, k_count);
    double anchor_price = nan;
    const bool ok = sample_last_before(ticks, limits, out) &&
                    sample_last_before(ticks, anchor_limit, std::span<double>(&anchor_price, 1));
    if (ok) {
      base[cell] = anchor_price;
      included[cell] = 1;
      return;
    }
    std::fill(out.begin(), out.end(), nan);
    if (options.policy == ExclusionPolicy::error) {
      throw DataError("stock " + store.symbols()[a] + " has no tick before " +
                      format_time_of_day(std::min(limits.front(), anchor)) + " on " + format_date(dates[t]));
    }
  });

  if (std::find(included.begin(), included.end(), 1) == included.end()) {
    throw DataError("empty panel: every stock-day was excluded");
  }
  return PricePanel(std::vector<std::string>(store.symbols().begin(), store.symbols().end()), std::move(dates),
                    limits, std::move(prices), std::move(base), std::move(included), spec.bin_seconds, anchor);
}

void write_panel_csv(std::ostream& out, const PricePanel& panel) {
  out << "symbol,date,bin_index,bin_limit,price\n";
  std::vector<std::string> limit_text;
  for (const Millis l : panel.bin_limits()) limit_text.push_back(format_time_of_day(l));
  std::string line;
  for (std::size_t a = 0; a < panel.stock_count(); ++a) {
    for (std::size_t t = 0; t < panel.day_count(); ++t) {
      if (!panel.included(a, t)) continue;
      const std::string prefix = panel.symbols()[a] + "," + format_date(panel.dates()[t]) + ",";
      const auto series = panel.series(a, t);
      for (std::size_t k = 0; k < series.size(); ++k) {
        line = prefix;
        line += std::to_string(k + 1);
        line.push_back(',');
        line += limit_text[k];
        line.push_back(',');
        append_number(line, series[k]);
        line.push_back('\n');
        out << line;
      }
    }
  }
}

}  // namespace intraday
