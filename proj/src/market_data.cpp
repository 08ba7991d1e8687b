#include "intraday/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "intraday/error.hpp"

namespace intraday {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<int> parse_fixed_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int value = 0;
  for (const char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct ParsedTimestamp {
  Date date;
  Millis time;
};

std::optional<ParsedTimestamp> parse_timestamp(std::string_view text) {
  if (all_digits(text)) {
    std::int64_t epoch_ms = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), epoch_ms);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    const std::int64_t day = floor_div(epoch_ms, kMillisPerDay);
    return ParsedTimestamp{Date{static_cast<std::int32_t>(day)}, epoch_ms - day * kMillisPerDay};
  }
  // YYYY-MM-DDTHH:MM:SS[.mmm]
  if (text.size() < 19 || text[10] != 'T') return std::nullopt;
  // Consecutive rows almost always share a date.
  thread_local char last_text[10] = {};
  thread_local std::optional<Date> last_date;
  std::optional<Date> date;
  if (last_date && text.compare(0, 10, std::string_view(last_text, 10)) == 0) {
    date = last_date;
  } else {
    date = parse_date(text.substr(0, 10));
    std::copy_n(text.data(), 10, last_text);
    last_date = date;
  }
  auto time = parse_time_of_day(text.substr(11));
  if (!date || !time || text.substr(11).size() < 8) return std::nullopt;
  return ParsedTimestamp{*date, *time};
}

std::string_view next_field(std::string_view& rest, bool& more) {
  const auto comma = rest.find(',');
  if (comma == std::string_view::npos) {
    more = false;
    auto field = rest;
    rest = {};
    return field;
  }
  more = true;
  auto field = rest.substr(0, comma);
  rest.remove_prefix(comma + 1);
  return field;
}

void append_two(std::string& out, int v) {
  out.push_back(static_cast<char>('0' + v / 10));
  out.push_back(static_cast<char>('0' + v % 10));
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = parse_fixed_int(text.substr(0, 4));
  auto m = parse_fixed_int(text.substr(5, 2));
  auto d = parse_fixed_int(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  using namespace std::chrono;
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*m)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count())};
}

std::string format_date(Date date) {
  using namespace std::chrono;
  const year_month_day ymd{sys_days{days{date.days}}};
  std::string out;
  const int y = static_cast<int>(ymd.year());
  out += std::to_string(y);
  out.push_back('-');
  append_two(out, static_cast<int>(static_cast<unsigned>(ymd.month())));
  out.push_back('-');
  append_two(out, static_cast<int>(static_cast<unsigned>(ymd.day())));
  return out;
}

std::optional<Millis> parse_time_of_day(std::string_view text) {
  if (text.size() < 5 || text[2] != ':') return std::nullopt;
  auto h = parse_fixed_int(text.substr(0, 2));
  auto m = parse_fixed_int(text.substr(3, 2));
  if (!h || !m || *h > 23 || *m > 59) return std::nullopt;
  int s = 0;
  int ms = 0;
  if (text.size() > 5) {
    if (text.size() < 8 || text[5] != ':') return std::nullopt;
    auto sec = parse_fixed_int(text.substr(6, 2));
    if (!sec || *sec > 59) return std::nullopt;
    s = *sec;
    if (text.size() > 8) {
      if (text.size() != 12 || text[8] != '.') return std::nullopt;
      auto milli = parse_fixed_int(text.substr(9, 3));
      if (!milli) return std::nullopt;
      ms = *milli;
    }
  }
  return ((static_cast<Millis>(*h) * 60 + *m) * 60 + s) * kMillisPerSecond + ms;
}

std::string format_time_of_day(Millis time) {
  const Millis ms = time % kMillisPerSecond;
  const Millis total_s = time / kMillisPerSecond;
  std::string out;
  append_two(out, static_cast<int>(total_s / 3600));
  out.push_back(':');
  append_two(out, static_cast<int>((total_s / 60) % 60));
  out.push_back(':');
  append_two(out, static_cast<int>(total_s % 60));
  if (ms != 0) {
    out.push_back('.');
    out.push_back(static_cast<char>('0' + ms / 100));
    append_two(out, static_cast<int>(ms % 100));
  }
  return out;
}

void SessionSpec::validate() const {
  if (bin_seconds <= 0) throw UsageError("bin size must be a positive number of seconds");
  if (close <= open) throw UsageError("session close must be after open");
  if (pre_open_margin < 0) throw UsageError("pre-open margin must be non-negative");
  const Millis bin_ms = static_cast<Millis>(bin_seconds) * kMillisPerSecond;
  if (session_length() % bin_ms != 0) {
    throw UsageError("session length of " + std::to_string(session_length() / kMillisPerSecond) +
                     " s is not a multiple of the bin size " + std::to_string(bin_seconds) + " s");
  }
  if (session_length() / bin_ms < 2) throw UsageError("session must contain at least 2 bins");
  if (!std::is_sorted(dates.begin(), dates.end()) ||
      std::adjacent_find(dates.begin(), dates.end()) != dates.end()) {
    throw UsageError("session dates must be strictly increasing");
  }
}

std::size_t SessionSpec::bin_count() const {
  return static_cast<std::size_t>(session_length() / (static_cast<Millis>(bin_seconds) * kMillisPerSecond));
}

Millis SessionSpec::bin_limit(std::size_t k) const {
  return open + static_cast<Millis>(k + 1) * bin_seconds * kMillisPerSecond;
}

std::vector<Millis> SessionSpec::bin_limits() const {
  std::vector<Millis> limits(bin_count());
  for (std::size_t k = 0; k < limits.size(); ++k) limits[k] = bin_limit(k);
  return limits;
}

TickStore::TickStore(std::vector<std::string> symbols, std::vector<Date> dates,
                     std::vector<std::vector<Tick>> series, std::size_t dropped_out_of_session)
    : symbols_(std::move(symbols)), dates_(std::move(dates)), dropped_(dropped_out_of_session) {
  if (series.size() != symbols_.size() * dates_.size()) {
    throw std::invalid_argument("TickStore: series count does not match symbols x dates");
  }
  offsets_.assign(series.size() + 1, 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    offsets_[i] = total;
    total += series[i].size();
  }
  offsets_.back() = total;
  ticks_.reserve(total);
  for (auto& s : series) {
    std::stable_sort(s.begin(), s.end(), [](const Tick& a, const Tick& b) { return a.time < b.time; });
    ticks_.insert(ticks_.end(), s.begin(), s.end());
  }
}

std::span<const Tick> TickStore::series(std::size_t stock, std::size_t day) const {
  const std::size_t i = stock * dates_.size() + day;
  return std::span<const Tick>(ticks_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::optional<std::size_t> TickStore::day_index(Date date) const {
  auto it = std::lower_bound(dates_.begin(), dates_.end(), date);
  if (it == dates_.end() || *it != date) return std::nullopt;
  return static_cast<std::size_t>(it - dates_.begin());
}

TickStore parse_ticks(std::istream& in, const SessionSpec& spec) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = std::move(buffer).str();
  return parse_ticks(std::string_view(text), spec);
}

TickStore parse_ticks(std::string_view text, const SessionSpec& spec) {
  struct Row {
    std::uint32_t symbol;
    std::int32_t date;
    Tick tick;
  };
  std::unordered_map<std::string_view, std::uint32_t> symbol_ids;
  std::vector<std::string_view> symbol_names;
  std::uint32_t last_symbol = 0;
  std::vector<Row> rows;
  rows.reserve(text.size() / 32);
  std::size_t dropped = 0;
  std::size_t data_rows = 0;
  std::size_t line_no = 0;
  bool first_line = true;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (first_line) {
      first_line = false;
      if (line == "symbol,timestamp,price") continue;
    }

    std::string_view rest = line;
    bool more = true;
    const auto symbol = next_field(rest, more);
    if (!more) throw ParseError(line_no, "expected 3 fields `symbol,timestamp,price`");
    const auto stamp = next_field(rest, more);
    if (!more) throw ParseError(line_no, "expected 3 fields `symbol,timestamp,price`");
    const auto price_text = next_field(rest, more);
    if (more) throw ParseError(line_no, "expected 3 fields `symbol,timestamp,price`");
    if (symbol.empty()) throw ParseError(line_no, "empty symbol");

    const auto ts = parse_timestamp(stamp);
    if (!ts) throw ParseError(line_no, "bad timestamp `" + std::string(stamp) + "`");
    double price = 0.0;
    auto [ptr, ec] = std::from_chars(price_text.data(), price_text.data() + price_text.size(), price);
    if (ec != std::errc{} || ptr != price_text.data() + price_text.size() || !std::isfinite(price)) {
      throw ParseError(line_no, "bad price `" + std::string(price_text) + "`");
    }
    if (price <= 0.0) throw ParseError(line_no, "non-positive price " + std::string(price_text));

    ++data_rows;
    if (!spec.in_session(ts->time)) {
      ++dropped;
      continue;
    }
    // Files are usually grouped by symbol; skip the hash lookup on repeats.
    if (symbol_names.empty() || symbol != symbol_names[last_symbol]) {
      auto [it, inserted] = symbol_ids.try_emplace(symbol, static_cast<std::uint32_t>(symbol_names.size()));
      if (inserted) symbol_names.push_back(symbol);
      last_symbol = it->second;
    }
    rows.push_back(Row{last_symbol, ts->date.days, Tick{ts->time, price}});
  }
  if (data_rows == 0) throw DataError("tick input contains no data rows");

  std::vector<std::uint32_t> order(symbol_names.size());
  std::iota(order.begin(), order.end(), 0U);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return symbol_names[a] < symbol_names[b]; });
  std::vector<std::uint32_t> rank(order.size());
  std::vector<std::string> symbols;
  symbols.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = static_cast<std::uint32_t>(i);
    symbols.emplace_back(symbol_names[order[i]]);
  }

  std::vector<Date> dates;
  for (const auto& r : rows) dates.push_back(Date{r.date});
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());

  std::vector<std::vector<Tick>> series(symbols.size() * dates.size());
  std::size_t day = 0;
  for (const auto& r : rows) {
    if (dates[day].days != r.date) {
      day = static_cast<std::size_t>(std::lower_bound(dates.begin(), dates.end(), Date{r.date}) - dates.begin());
    }
    series[rank[r.symbol] * dates.size() + day].push_back(r.tick);
  }
  return TickStore(std::move(symbols), std::move(dates), std::move(series), dropped);
}

void write_ticks_csv(std::ostream& out, const TickStore& store) {
  out << "symbol,timestamp,price\n";
  std::string line;
  char buf[64];
  for (std::size_t a = 0; a < store.stock_count(); ++a) {
    for (std::size_t t = 0; t < store.day_count(); ++t) {
      const std::string date = format_date(store.dates()[t]);
      for (const Tick& tick : store.series(a, t)) {
        line.assign(store.symbols()[a]);
        line.push_back(',');
        line += date;
        line.push_back('T');
        std::string tod = format_time_of_day(tick.time);
        if (tick.time % kMillisPerSecond == 0) tod += ".000";
        line += tod;
        line.push_back(',');
        auto res = std::to_chars(buf, buf + sizeof buf, tick.price);
        line.append(buf, res.ptr);
        line.push_back('\n');
        out << line;
      }
    }
  }
}

std::vector<CoverageRow> coverage_report(const TickStore& store, const SessionSpec& spec) {
  const std::vector<Date> dates =
      spec.dates.empty() ? std::vector<Date>(store.dates().begin(), store.dates().end()) : spec.dates;
  std::vector<CoverageRow> rows;
  rows.reserve(store.stock_count() * dates.size());
  for (std::size_t a = 0; a < store.stock_count(); ++a) {
    for (const Date date : dates) {
      CoverageRow row{a, date, 0, std::nullopt, std::nullopt};
      if (auto day = store.day_index(date)) {
        const auto s = store.series(a, *day);
        row.count = s.size();
        if (!s.empty()) {
          row.first = s.front().time;
          row.last = s.back().time;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace intraday
