#pragma once

// Synthetic asynchronous tick data with known generating parameters: Poisson
// trade arrivals, a one-factor log-price diffusion modulated by an intraday
// volatility profile, and optional injected anomalies.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "intraday/market_data.hpp"
#include "intraday/parallel.hpp"

namespace intraday {

enum class InnovationLaw { gaussian, student_t };

/// Volatility multiplier as a function of the session fraction u in [0, 1].
struct VolatilityProfile {
  enum class Kind { flat, u_shaped, custom };

  Kind kind = Kind::flat;
  double open_level = 2.0;
  double trough_level = 1.0;
  double close_level = 1.5;
  double trough_position = 0.5;
  std::vector<double> table;  // custom: equally spaced knots over [0, 1], linear in between

  static VolatilityProfile flat() { return {}; }
  static VolatilityProfile u_shaped(double open = 2.0, double trough = 1.0, double close = 1.5);

  /// Cosine interpolation open -> trough -> close for the U shape.
  double at(double u) const;
};

enum class AnomalyKind { crash_day, rogue_stock };

struct AnomalyInjection {
  AnomalyKind kind = AnomalyKind::crash_day;
  std::size_t target = 0;  // day index for crash_day, stock index for rogue_stock
  /// crash_day: total log-price decline over the session on every stock.
  /// rogue_stock: multiplier applied to that stock's volatility profile.
  double magnitude = 0.0;
};

struct SynthConfig {
  std::size_t stocks = 100;
  std::size_t days = 22;
  Millis open = 10 * 3600 * kMillisPerSecond;
  Millis close = 16 * 3600 * kMillisPerSecond;
  Date first_date{15034};  // 2011-03-01; days are consecutive weekdays
  double ticks_per_minute = 6.0;
  double volatility = 1e-3;  // log-price volatility per sqrt(minute) at profile level 1
  VolatilityProfile profile;
  InnovationLaw law = InnovationLaw::gaussian;
  double nu = 3.0;
  double beta = 0.0;   // loading on the common shock, in [0, 1)
  double drift = 0.0;  // log-price drift per session, all stocks and days
  std::vector<AnomalyInjection> injections;
  std::uint64_t seed = 0;

  /// Throws UsageError for a non-positive rate, nu <= 2 with Student-t,
  /// beta outside [0, 1), non-positive profile values or bad anomaly targets.
  void validate() const;
};

struct GroundTruth {
  double volatility = 0.0;
  std::vector<double> profile_per_minute;  // multiplier at the start of each session minute
  double implied_correlation = 0.0;
  std::vector<AnomalyInjection> injections;
  std::vector<std::size_t> emission_counts;  // stock-major (stock * days + day)
};

struct SynthData {
  TickStore store;
  GroundTruth truth;
};

/// Generates N stocks x D days of ticks. Each (stock, day) draws from its own
/// stream derived from (seed, stock, day) and the common shock of a day from
/// (seed, day), so the output does not depend on execution order.
SynthData generate(const SynthConfig& config, Execution exec = Execution::parallel);

/// Tick CSV with prices at 4 decimal places.
void write_synth_ticks_csv(std::ostream& out, const TickStore& store);
void write_ground_truth_json(std::ostream& out, const SynthConfig& config, const GroundTruth& truth);

/// Pairwise correlation of returns implied by the one-factor model: beta^2.
/// Throws UsageError for beta outside [0, 1).
double implied_correlation(const SynthConfig& config);

}  // namespace intraday
