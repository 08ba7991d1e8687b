#include "intraday/observables.hpp"

#include <limits>
#include <ostream>

#include "intraday/csv_format.hpp"
#include "intraday/error.hpp"
#include "intraday/moments.hpp"

namespace intraday {

std::string_view to_string(ObservableKind kind) {
  switch (kind) {
    case ObservableKind::returns: return "returns";
    case ObservableKind::relative_prices: return "relative";
    case ObservableKind::normalized_returns: return "normalized_returns";
  }
  return "unknown";
}

ObservablePanel::ObservablePanel(ObservableKind kind, std::vector<std::string> symbols, std::vector<Date> dates,
                                 std::vector<Millis> bin_times, std::vector<double> values,
                                 std::vector<unsigned char> included, int bin_seconds)
    : kind_(kind),
      symbols_(std::move(symbols)),
      dates_(std::move(dates)),
      bin_times_(std::move(bin_times)),
      values_(std::move(values)),
      included_(std::move(included)),
      bin_seconds_(bin_seconds) {}

namespace {

std::vector<unsigned char> inclusion_mask(const PricePanel& panel) {
  std::vector<unsigned char> mask(panel.stock_count() * panel.day_count());
  for (std::size_t a = 0; a < panel.stock_count(); ++a)
    for (std::size_t t = 0; t < panel.day_count(); ++t) mask[a * panel.day_count() + t] = panel.included(a, t);
  return mask;
}

}  // namespace

ObservablePanel compute_returns(const PricePanel& panel) {
  const std::size_t bins = panel.bin_count() - 1;
  std::vector<double> values(panel.stock_count() * panel.day_count() * bins,
                             std::numeric_limits<double>::quiet_NaN());
  for (std::size_t a = 0; a < panel.stock_count(); ++a) {
    for (std::size_t t = 0; t < panel.day_count(); ++t) {
      if (!panel.included(a, t)) continue;
      const auto p = panel.series(a, t);
      double* out = values.data() + (a * panel.day_count() + t) * bins;
      for (std::size_t k = 0; k < bins; ++k) out[k] = (p[k + 1] - p[k]) / p[k];
    }
  }
  std::vector<Millis> times(panel.bin_limits().begin(), panel.bin_limits().end() - 1);
  return ObservablePanel(ObservableKind::returns, {panel.symbols().begin(), panel.symbols().end()},
                         {panel.dates().begin(), panel.dates().end()}, std::move(times), std::move(values),
                         inclusion_mask(panel), panel.bin_seconds());
}

ObservablePanel compute_relative_prices(const PricePanel& panel) {
  const std::size_t bins = panel.bin_count();
  std::vector<double> values(panel.stock_count() * panel.day_count() * bins,
                             std::numeric_limits<double>::quiet_NaN());
  for (std::size_t a = 0; a < panel.stock_count(); ++a) {
    for (std::size_t t = 0; t < panel.day_count(); ++t) {
      if (!panel.included(a, t)) continue;
      const auto p = panel.series(a, t);
      const double base = panel.base_price(a, t);
      double* out = values.data() + (a * panel.day_count() + t) * bins;
      for (std::size_t k = 0; k < bins; ++k) out[k] = (p[k] - base) / base;
    }
  }
  return ObservablePanel(ObservableKind::relative_prices, {panel.symbols().begin(), panel.symbols().end()},
                         {panel.dates().begin(), panel.dates().end()},
                         {panel.bin_limits().begin(), panel.bin_limits().end()}, std::move(values),
                         inclusion_mask(panel), panel.bin_seconds());
}

ObservablePanel normalize_returns(const ObservablePanel& returns, const CrossSectionMoments& dispersion) {
  if (returns.kind() != ObservableKind::returns) throw UsageError("normalize_returns expects a returns panel");
  if (dispersion.bin_count() != returns.bin_count() || dispersion.day_count() != returns.day_count()) {
    throw UsageError("dispersion grid does not match the returns panel");
  }
  const std::size_t n = returns.stock_count();
  const std::size_t d = returns.day_count();
  const std::size_t bins = returns.bin_count();
  std::vector<double> values(n * d * bins, std::numeric_limits<double>::quiet_NaN());
  std::vector<unsigned char> mask(n * d);
  for (std::size_t t = 0; t < d; ++t) {
    bool any = false;
    for (std::size_t a = 0; a < n; ++a) {
      mask[a * d + t] = returns.included(a, t);
      any = any || returns.included(a, t);
    }
    if (!any) continue;
    for (std::size_t k = 0; k < bins; ++k) {
      const auto& cell = dispersion.cell(k, t);
      if (!cell || !(cell->volatility > 0.0)) {
        throw NumericError("degenerate cross-section at bin " + std::to_string(k + 1) + " on " +
                           format_date(returns.dates()[t]) + ": dispersion is zero or undefined");
      }
      for (std::size_t a = 0; a < n; ++a) {
        if (!returns.included(a, t)) continue;
        values[(a * d + t) * bins + k] = returns.value(a, t, k) / cell->volatility;
      }
    }
  }
  return ObservablePanel(ObservableKind::normalized_returns, {returns.symbols().begin(), returns.symbols().end()},
                         {returns.dates().begin(), returns.dates().end()},
                         {returns.bin_times().begin(), returns.bin_times().end()}, std::move(values),
                         std::move(mask), returns.bin_seconds());
}

void write_observable_csv(std::ostream& out, const ObservablePanel& obs) {
  out << "symbol,date,bin_index,kind,value\n";
  const std::string kind(to_string(obs.kind()));
  std::string line;
  for (std::size_t a = 0; a < obs.stock_count(); ++a) {
    for (std::size_t t = 0; t < obs.day_count(); ++t) {
      if (!obs.included(a, t)) continue;
      const std::string prefix = obs.symbols()[a] + "," + format_date(obs.dates()[t]) + ",";
      const auto s = obs.series(a, t);
      for (std::size_t k = 0; k < s.size(); ++k) {
        line = prefix;
        line += std::to_string(k + 1);
        line.push_back(',');
        line += kind;
        line.push_back(',');
        append_number(line, s[k]);
        line.push_back('\n');
        out << line;
      }
    }
  }
}

}  // namespace intraday
