#pragma once

// Raw asynchronous tick data: parsing, session filtering and per-(stock, day)
// indexing.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace intraday {

/// Milliseconds since midnight on the session-local clock.
using Millis = std::int64_t;

inline constexpr Millis kMillisPerSecond = 1000;
inline constexpr Millis kMillisPerDay = 86'400'000;

/// Calendar date as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;
  auto operator<=>(const Date&) const = default;
};

/// Parses `YYYY-MM-DD`. Returns nullopt on malformed or impossible dates.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

/// Parses `HH:MM`, `HH:MM:SS` or `HH:MM:SS.mmm`.
std::optional<Millis> parse_time_of_day(std::string_view text);
/// `HH:MM:SS`, with `.mmm` appended when the value has a sub-second part.
std::string format_time_of_day(Millis time);

struct TickRecord {
  std::string symbol;
  Date date;
  Millis time = 0;
  double price = 0.0;
};

/// One trade inside a (stock, day) series.
struct Tick {
  Millis time = 0;
  double price = 0.0;
};

/// Trading-session layout: [open, close] split into K bins of `bin_seconds`.
/// An empty `dates` list means "all dates present in the data".
struct SessionSpec {
  Millis open = 10 * 3600 * kMillisPerSecond;
  Millis close = 16 * 3600 * kMillisPerSecond;
  std::vector<Date> dates;
  int bin_seconds = 60;
  /// Ticks in [open - margin, open) are kept; they can seed the first bin price.
  Millis pre_open_margin = 0;

  /// Throws UsageError unless close > open, the session length is a multiple
  /// of the bin size and K >= 2.
  void validate() const;
  Millis session_length() const { return close - open; }
  std::size_t bin_count() const;
  /// Right endpoint of bin k (0-based): open + (k + 1) * T.
  Millis bin_limit(std::size_t k) const;
  std::vector<Millis> bin_limits() const;
  bool in_session(Millis time) const { return time >= open - pre_open_margin && time <= close; }
};

/// Immutable index of in-session ticks, one time-sorted series per
/// (stock, day). Stocks are ordered lexicographically by symbol, days
/// chronologically.
class TickStore {
 public:
  TickStore() = default;

  /// Builds a store from per-(stock, day) series laid out stock-major
  /// (`series[stock * dates.size() + day]`). Symbols must be sorted and
  /// unique, dates sorted and unique. Each series is stable-sorted by time.
  TickStore(std::vector<std::string> symbols, std::vector<Date> dates,
            std::vector<std::vector<Tick>> series, std::size_t dropped_out_of_session = 0);

  std::span<const std::string> symbols() const { return symbols_; }
  std::span<const Date> dates() const { return dates_; }
  std::size_t stock_count() const { return symbols_.size(); }
  std::size_t day_count() const { return dates_.size(); }

  std::span<const Tick> series(std::size_t stock, std::size_t day) const;
  std::optional<std::size_t> day_index(Date date) const;

  std::size_t tick_count() const { return ticks_.size(); }
  /// Rows dropped by the parser because they fell outside the session.
  std::size_t dropped_out_of_session() const { return dropped_; }

 private:
  std::vector<std::string> symbols_;
  std::vector<Date> dates_;
  std::vector<Tick> ticks_;
  std::vector<std::size_t> offsets_;  // stock-major CSR offsets, size N*D + 1
  std::size_t dropped_ = 0;
};

/// Parses the tick CSV (`symbol,timestamp,price`, header optional).
/// Timestamps are `YYYY-MM-DDTHH:MM:SS.mmm` on the session-local clock or
/// integer epoch milliseconds. Out-of-session rows are dropped and counted.
/// Throws ParseError for malformed rows or non-positive prices and DataError
/// for input with no data rows.
TickStore parse_ticks(std::istream& in, const SessionSpec& spec);
TickStore parse_ticks(std::string_view text, const SessionSpec& spec);

/// Writes the store back in tick CSV form. Prices use the shortest decimal
/// representation that round-trips.
void write_ticks_csv(std::ostream& out, const TickStore& store);

struct CoverageRow {
  std::size_t stock = 0;
  Date date;
  std::size_t count = 0;
  std::optional<Millis> first;
  std::optional<Millis> last;
};

/// Per-(stock, day) tick counts and first/last tick times, stock-major. Days
/// come from `spec.dates` when given, otherwise from the store.
std::vector<CoverageRow> coverage_report(const TickStore& store, const SessionSpec& spec);

}  // namespace intraday
