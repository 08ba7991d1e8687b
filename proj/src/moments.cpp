#include "intraday/moments.hpp"

#include <array>
#include <cmath>
#include <ostream>

#include "intraday/csv_format.hpp"
#include "intraday/error.hpp"

namespace intraday {

namespace {

constexpr std::array<Statistic, 4> kFourMoments = {Statistic::mean, Statistic::volatility, Statistic::skewness,
                                                   Statistic::kurtosis};

std::optional<RobustMoments> try_moments(std::span<const double> sample, KurtosisMode mode,
                                         std::vector<double>& scratch) {
  if (sample.size() < 2) return std::nullopt;
  try {
    return robust_moments(sample, mode, scratch);
  } catch (const NumericError&) {
    return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(Statistic stat) {
  switch (stat) {
    case Statistic::mean: return "mean";
    case Statistic::volatility: return "volatility";
    case Statistic::skewness: return "skewness";
    case Statistic::kurtosis: return "kurtosis";
    case Statistic::median: return "median";
    case Statistic::abs_mean: return "abs_mean";
  }
  return "unknown";
}

std::optional<Statistic> parse_statistic(std::string_view name) {
  for (auto s : {Statistic::mean, Statistic::volatility, Statistic::skewness, Statistic::kurtosis,
                 Statistic::median, Statistic::abs_mean}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

double statistic_value(const RobustMoments& m, Statistic stat) {
  switch (stat) {
    case Statistic::mean: return m.mean;
    case Statistic::volatility: return m.volatility;
    case Statistic::skewness: return m.skewness;
    case Statistic::kurtosis: return m.kurtosis;
    case Statistic::median: return m.median;
    case Statistic::abs_mean: return std::abs(m.mean);
  }
  return m.mean;
}

std::string_view to_string(Aggregation agg) {
  return agg == Aggregation::stock_average ? "stock_average" : "time_average";
}

SingleStockMoments::SingleStockMoments(std::vector<std::string> symbols, std::vector<Millis> bin_times,
                                       std::vector<std::optional<RobustMoments>> cells,
                                       std::vector<std::size_t> counts)
    : symbols_(std::move(symbols)),
      bin_times_(std::move(bin_times)),
      cells_(std::move(cells)),
      counts_(std::move(counts)) {}

CrossSectionMoments::CrossSectionMoments(std::vector<Date> dates, std::vector<Millis> bin_times,
                                         std::vector<std::optional<RobustMoments>> cells,
                                         std::vector<std::size_t> counts)
    : dates_(std::move(dates)), bin_times_(std::move(bin_times)), cells_(std::move(cells)), counts_(std::move(counts)) {}

SingleStockMoments single_stock_moments(const ObservablePanel& obs, KurtosisMode mode, Execution exec) {
  const std::size_t n = obs.stock_count();
  const std::size_t d = obs.day_count();
  const std::size_t bins = obs.bin_count();
  std::vector<std::optional<RobustMoments>> cells(n * bins);
  std::vector<std::size_t> counts(n * bins, 0);

  // One task per stock; the day series of a stock are contiguous.
  for_each_index(exec, n, [&](std::size_t a) {
    std::vector<double> sample;
    std::vector<double> scratch;
    sample.reserve(d);
    for (std::size_t k = 0; k < bins; ++k) {
      sample.clear();
      for (std::size_t t = 0; t < d; ++t) {
        if (obs.included(a, t)) sample.push_back(obs.value(a, t, k));
      }
      counts[a * bins + k] = sample.size();
      cells[a * bins + k] = try_moments(sample, mode, scratch);
    }
  });
  return SingleStockMoments({obs.symbols().begin(), obs.symbols().end()},
                            {obs.bin_times().begin(), obs.bin_times().end()}, std::move(cells), std::move(counts));
}

CrossSectionMoments cross_section_moments(const ObservablePanel& obs, KurtosisMode mode, Execution exec) {
  const std::size_t n = obs.stock_count();
  const std::size_t d = obs.day_count();
  const std::size_t bins = obs.bin_count();
  std::vector<std::optional<RobustMoments>> cells(bins * d);
  std::vector<std::size_t> counts(bins * d, 0);

  // One task per day.
  for_each_index(exec, d, [&](std::size_t t) {
    std::vector<std::size_t> members;
    for (std::size_t a = 0; a < n; ++a)
      if (obs.included(a, t)) members.push_back(a);
    std::vector<double> sample(members.size());
    std::vector<double> scratch;
    for (std::size_t k = 0; k < bins; ++k) {
      for (std::size_t i = 0; i < members.size(); ++i) sample[i] = obs.value(members[i], t, k);
      counts[k * d + t] = sample.size();
      cells[k * d + t] = try_moments(sample, mode, scratch);
    }
  });
  return CrossSectionMoments({obs.dates().begin(), obs.dates().end()},
                             {obs.bin_times().begin(), obs.bin_times().end()}, std::move(cells), std::move(counts));
}

std::string SeasonalCurve::label() const {
  return std::string(to_string(aggregation)) + ":" + std::string(to_string(statistic));
}

SeasonalCurve stock_average(const SingleStockMoments& m, Statistic stat) {
  SeasonalCurve curve{stat, Aggregation::stock_average, {m.bin_times().begin(), m.bin_times().end()}, {}, {}};
  curve.values.resize(m.bin_count());
  curve.counts.assign(m.bin_count(), 0);
  for (std::size_t k = 0; k < m.bin_count(); ++k) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t a = 0; a < m.stock_count(); ++a) {
      if (const auto& c = m.cell(a, k)) {
        sum += statistic_value(*c, stat);
        ++count;
      }
    }
    curve.counts[k] = count;
    if (count > 0) curve.values[k] = sum / static_cast<double>(count);
  }
  return curve;
}

SeasonalCurve time_average(const CrossSectionMoments& m, Statistic stat) {
  SeasonalCurve curve{stat, Aggregation::time_average, {m.bin_times().begin(), m.bin_times().end()}, {}, {}};
  curve.values.resize(m.bin_count());
  curve.counts.assign(m.bin_count(), 0);
  for (std::size_t k = 0; k < m.bin_count(); ++k) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < m.day_count(); ++t) {
      if (const auto& c = m.cell(k, t)) {
        sum += statistic_value(*c, stat);
        ++count;
      }
    }
    curve.counts[k] = count;
    if (count > 0) curve.values[k] = sum / static_cast<double>(count);
  }
  return curve;
}

std::vector<SeasonalCurve> stock_average(const SingleStockMoments& m) {
  std::vector<SeasonalCurve> curves;
  for (const auto stat : kFourMoments) curves.push_back(stock_average(m, stat));
  return curves;
}

std::vector<SeasonalCurve> time_average(const CrossSectionMoments& m) {
  std::vector<SeasonalCurve> curves;
  for (const auto stat : kFourMoments) curves.push_back(time_average(m, stat));
  curves.push_back(time_average(m, Statistic::abs_mean));
  return curves;
}

VolatilityProxies volatility_proxies(const ObservablePanel& obs, KurtosisMode mode, Execution exec) {
  const auto single = single_stock_moments(obs, mode, exec);
  const auto cross = cross_section_moments(obs, mode, exec);
  return VolatilityProxies{stock_average(single, Statistic::volatility),
                           time_average(cross, Statistic::volatility), time_average(cross, Statistic::abs_mean)};
}

void write_curves_csv(std::ostream& out, std::span<const SeasonalCurve> curves) {
  out << "bin_index,bin_time,statistic,aggregation,value,count\n";
  std::string line;
  for (const auto& curve : curves) {
    for (std::size_t k = 0; k < curve.size(); ++k) {
      line = std::to_string(k + 1);
      line.push_back(',');
      line += format_time_of_day(curve.bin_times[k]);
      line.push_back(',');
      line += to_string(curve.statistic);
      line.push_back(',');
      line += to_string(curve.aggregation);
      line.push_back(',');
      append_optional(line, curve.values[k]);
      line.push_back(',');
      line += std::to_string(curve.counts[k]);
      line.push_back('\n');
      out << line;
    }
  }
}

namespace {

void append_cell(std::string& line, const std::optional<RobustMoments>& cell, Statistic stat, std::size_t count) {
  line.push_back(',');
  line += to_string(stat);
  line.push_back(',');
  if (cell) append_number(line, statistic_value(*cell, stat));
  line.push_back(',');
  line += std::to_string(count);
  line.push_back('\n');
}

}  // namespace

void write_single_stock_csv(std::ostream& out, const SingleStockMoments& m) {
  out << "symbol,bin_index,bin_time,statistic,value,count\n";
  std::string line;
  for (std::size_t a = 0; a < m.stock_count(); ++a) {
    for (const auto stat : kFourMoments) {
      for (std::size_t k = 0; k < m.bin_count(); ++k) {
        line = m.symbols()[a] + "," + std::to_string(k + 1) + "," + format_time_of_day(m.bin_times()[k]);
        append_cell(line, m.cell(a, k), stat, m.count(a, k));
        out << line;
      }
    }
  }
}

void write_cross_section_csv(std::ostream& out, const CrossSectionMoments& m) {
  out << "date,bin_index,bin_time,statistic,value,count\n";
  std::string line;
  for (std::size_t t = 0; t < m.day_count(); ++t) {
    const std::string date = format_date(m.dates()[t]);
    for (const auto stat : kFourMoments) {
      for (std::size_t k = 0; k < m.bin_count(); ++k) {
        line = date + "," + std::to_string(k + 1) + "," + format_time_of_day(m.bin_times()[k]);
        append_cell(line, m.cell(k, t), stat, m.count(k, t));
        out << line;
      }
    }
  }
}

}  // namespace intraday
