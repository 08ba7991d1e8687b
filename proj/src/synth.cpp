#include "intraday/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "intraday/error.hpp"
#include "intraday/rng.hpp"
#include "json.hpp"

namespace intraday {

namespace {

constexpr std::uint64_t kCommonStream = 0xc0ffee;
constexpr std::uint64_t kPriceStream = 0xba5e;
constexpr double kMillisPerMinute = 60'000.0;

std::string_view law_name(InnovationLaw law) { return law == InnovationLaw::gaussian ? "gaussian" : "student_t"; }

std::string_view anomaly_name(AnomalyKind kind) {
  return kind == AnomalyKind::crash_day ? "crash_day" : "rogue_stock";
}

/// Unit-variance innovations.
class Innovation {
 public:
  Innovation(InnovationLaw law, double nu) : law_(law), student_(nu), scale_(std::sqrt((nu - 2.0) / nu)) {}

  template <class Rng>
  double operator()(Rng& rng) {
    return law_ == InnovationLaw::gaussian ? normal_(rng) : student_(rng) * scale_;
  }

 private:
  InnovationLaw law_;
  std::normal_distribution<double> normal_;
  std::student_t_distribution<double> student_;
  double scale_;
};

std::vector<Date> weekdays_from(Date first, std::size_t count) {
  std::vector<Date> out;
  Date d = first;
  while (out.size() < count) {
    const int weekday = ((d.days + 4) % 7 + 7) % 7;  // 0 = Sunday; 1970-01-01 was a Thursday
    if (weekday != 0 && weekday != 6) out.push_back(d);
    ++d.days;
  }
  return out;
}

std::vector<std::string> symbol_names(std::size_t count) {
  const int width = std::max<int>(3, static_cast<int>(std::to_string(count).size()));
  std::vector<std::string> out;
  char buf[32];
  for (std::size_t i = 1; i <= count; ++i) {
    std::snprintf(buf, sizeof buf, "S%0*zu", width, i);
    out.emplace_back(buf);
  }
  return out;
}

}  // namespace

VolatilityProfile VolatilityProfile::u_shaped(double open, double trough, double close) {
  VolatilityProfile p;
  p.kind = Kind::u_shaped;
  p.open_level = open;
  p.trough_level = trough;
  p.close_level = close;
  return p;
}

double VolatilityProfile::at(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind) {
    case Kind::flat:
      return 1.0;
    case Kind::u_shaped: {
      using std::numbers::pi;
      if (u <= trough_position) {
        const double w = (1.0 + std::cos(pi * u / trough_position)) / 2.0;
        return trough_level + (open_level - trough_level) * w;
      }
      const double w = (1.0 - std::cos(pi * (u - trough_position) / (1.0 - trough_position))) / 2.0;
      return trough_level + (close_level - trough_level) * w;
    }
    case Kind::custom: {
      if (table.size() == 1) return table.front();
      const double x = u * static_cast<double>(table.size() - 1);
      const auto i = std::min(static_cast<std::size_t>(x), table.size() - 2);
      const double f = x - static_cast<double>(i);
      return table[i] * (1.0 - f) + table[i + 1] * f;
    }
  }
  return 1.0;
}

void SynthConfig::validate() const {
  if (stocks == 0 || days == 0) throw UsageError("synthetic data needs at least one stock and one day");
  if (close <= open) throw UsageError("session close must be after open");
  if (!(ticks_per_minute > 0.0)) throw UsageError("tick rate must be positive");
  if (!(volatility > 0.0)) throw UsageError("volatility must be positive");
  if (law == InnovationLaw::student_t && !(nu > 2.0)) throw UsageError("Student-t innovations need nu > 2");
  if (!(beta >= 0.0 && beta < 1.0)) throw UsageError("factor loading beta must lie in [0, 1)");
  if (profile.kind == VolatilityProfile::Kind::u_shaped &&
      !(profile.open_level > 0 && profile.trough_level > 0 && profile.close_level > 0 &&
        profile.trough_position > 0 && profile.trough_position < 1)) {
    throw UsageError("U-shaped profile levels must be positive with the trough inside the session");
  }
  if (profile.kind == VolatilityProfile::Kind::custom &&
      (profile.table.empty() || std::any_of(profile.table.begin(), profile.table.end(), [](double v) { return !(v > 0); }))) {
    throw UsageError("custom profile values must be positive");
  }
  for (const auto& inj : injections) {
    if (inj.kind == AnomalyKind::crash_day && inj.target >= days) throw UsageError("crash day index out of range");
    if (inj.kind == AnomalyKind::rogue_stock && (inj.target >= stocks || !(inj.magnitude > 0.0))) {
      throw UsageError("rogue stock needs a valid stock index and a positive magnitude");
    }
  }
}

double implied_correlation(const SynthConfig& config) {
  if (!(config.beta >= 0.0 && config.beta < 1.0)) throw UsageError("factor loading beta must lie in [0, 1)");
  return config.beta * config.beta;
}

SynthData generate(const SynthConfig& config, Execution exec) {
  config.validate();
  const std::size_t n = config.stocks;
  const std::size_t d = config.days;
  const double session_ms = static_cast<double>(config.close - config.open);
  const double session_min = session_ms / kMillisPerMinute;
  const auto seconds = static_cast<std::size_t>(std::ceil(session_ms / 1000.0));

  // Common factor: one Brownian-type path per day on a 1 s grid, in sqrt(minute) units.
  std::vector<std::vector<double>> common(d);
  for_each_index(exec, d, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed({config.seed, kCommonStream, t}));
    Innovation draw(config.law, config.nu);
    const double step = std::sqrt(1.0 / 60.0);
    auto& path = common[t];
    path.resize(seconds + 1);
    path[0] = 0.0;
    for (std::size_t i = 1; i <= seconds; ++i) path[i] = path[i - 1] + step * draw(rng);
  });
  auto common_at = [&](std::size_t t, double offset_ms) {
    const double x = std::clamp(offset_ms / 1000.0, 0.0, static_cast<double>(seconds));
    const auto i = std::min(static_cast<std::size_t>(x), seconds - 1);
    const double f = x - static_cast<double>(i);
    return common[t][i] * (1.0 - f) + common[t][i + 1] * f;
  };

  std::vector<double> profile_scale(n, 1.0);
  std::vector<double> day_drift(d, config.drift);
  for (const auto& inj : config.injections) {
    if (inj.kind == AnomalyKind::rogue_stock) profile_scale[inj.target] *= inj.magnitude;
    if (inj.kind == AnomalyKind::crash_day) day_drift[inj.target] -= inj.magnitude;
  }

  std::vector<double> base_price(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::mt19937_64 rng(derive_seed({config.seed, kPriceStream, a}));
    base_price[a] = std::uniform_real_distribution<double>(20.0, 200.0)(rng);
  }

  const double rate_per_ms = config.ticks_per_minute / kMillisPerMinute;
  const double idio_weight = std::sqrt(1.0 - config.beta * config.beta);
  std::vector<std::vector<Tick>> series(n * d);
  std::vector<std::size_t> counts(n * d, 0);

  for_each_index(exec, n * d, [&](std::size_t cell) {
    const std::size_t a = cell / d;
    const std::size_t t = cell % d;
    std::mt19937_64 rng(derive_seed({config.seed, a, t}));
    std::exponential_distribution<double> gap(rate_per_ms);
    Innovation draw(config.law, config.nu);
    const double drift_per_min = day_drift[t] / session_min;
    auto& out = series[cell];
    out.reserve(static_cast<std::size_t>(config.ticks_per_minute * session_min * 1.1) + 8);

    double log_price = std::log(base_price[a]);
    double prev = 0.0;  // offset from the open, ms
    double prev_common = 0.0;
    while (true) {
      const double now = prev + gap(rng);
      if (now > session_ms) break;
      const double dt_min = (now - prev) / kMillisPerMinute;
      const double level = config.volatility * profile_scale[a] * config.profile.at((prev + now) / 2.0 / session_ms);
      const double now_common = common_at(t, now);
      const double shock = config.beta * (now_common - prev_common) + idio_weight * std::sqrt(dt_min) * draw(rng);
      log_price += drift_per_min * dt_min + level * shock;
      const double price = std::max(std::round(std::exp(log_price) * 1e4) / 1e4, 1e-4);
      out.push_back(Tick{config.open + static_cast<Millis>(now), price});
      prev = now;
      prev_common = now_common;
    }
    counts[cell] = out.size();
  });

  GroundTruth truth;
  truth.volatility = config.volatility;
  for (std::size_t m = 0; m < static_cast<std::size_t>(session_min); ++m) {
    truth.profile_per_minute.push_back(config.profile.at(static_cast<double>(m) / session_min));
  }
  truth.implied_correlation = implied_correlation(config);
  truth.injections = config.injections;
  truth.emission_counts = counts;

  return SynthData{TickStore(symbol_names(n), weekdays_from(config.first_date, d), std::move(series)),
                   std::move(truth)};
}

void write_synth_ticks_csv(std::ostream& out, const TickStore& store) {
  out << "symbol,timestamp,price\n";
  std::string line;
  char buf[48];
  for (std::size_t a = 0; a < store.stock_count(); ++a) {
    for (std::size_t t = 0; t < store.day_count(); ++t) {
      const std::string prefix = store.symbols()[a] + "," + format_date(store.dates()[t]) + "T";
      for (const Tick& tick : store.series(a, t)) {
        const Millis s = tick.time / kMillisPerSecond;
        const int len = std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld,%.4f\n",
                                      static_cast<long long>(s / 3600), static_cast<long long>((s / 60) % 60),
                                      static_cast<long long>(s % 60),
                                      static_cast<long long>(tick.time % kMillisPerSecond), tick.price);
        line = prefix;
        line.append(buf, static_cast<std::size_t>(len));
        out << line;
      }
    }
  }
}

void write_ground_truth_json(std::ostream& out, const SynthConfig& config, const GroundTruth& truth) {
  nlohmann::json j;
  j["seed"] = config.seed;
  j["stocks"] = config.stocks;
  j["days"] = config.days;
  j["session_open"] = format_time_of_day(config.open);
  j["session_close"] = format_time_of_day(config.close);
  j["ticks_per_minute"] = config.ticks_per_minute;
  j["volatility_per_sqrt_minute"] = truth.volatility;
  j["innovation_law"] = law_name(config.law);
  if (config.law == InnovationLaw::student_t) j["nu"] = config.nu;
  j["beta"] = config.beta;
  j["drift_per_session"] = config.drift;
  j["implied_correlation"] = truth.implied_correlation;
  j["profile_per_minute"] = truth.profile_per_minute;
  auto anomalies = nlohmann::json::array();
  for (const auto& inj : truth.injections) {
    anomalies.push_back({{"kind", anomaly_name(inj.kind)}, {"target", inj.target}, {"magnitude", inj.magnitude}});
  }
  j["anomalies"] = anomalies;
  auto counts = nlohmann::json::array();
  const std::vector<std::string> names = symbol_names(config.stocks);
  const std::vector<Date> dates = weekdays_from(config.first_date, config.days);
  for (std::size_t a = 0; a < config.stocks; ++a) {
    for (std::size_t t = 0; t < config.days; ++t) {
      counts.push_back({{"symbol", names[a]}, {"date", format_date(dates[t])},
                        {"ticks", truth.emission_counts[a * config.days + t]}});
    }
  }
  j["emission_counts"] = counts;
  out << j.dump(2) << "\n";
}

}  // namespace intraday
