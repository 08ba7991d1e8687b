#include "intraday/robust.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "intraday/error.hpp"

namespace intraday {

RobustMoments robust_moments(std::span<const double> sample, KurtosisMode mode) {
  std::vector<double> scratch;
  return robust_moments(sample, mode, scratch);
}

RobustMoments robust_moments(std::span<const double> sample, KurtosisMode mode, std::vector<double>& scratch) {
  const std::size_t n = sample.size();
  if (n < 2) throw NumericError("robust moments need at least 2 values, got " + std::to_string(n));
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  if (*lo == *hi) throw NumericError("zero dispersion: all values identical");

  const double inv_n = 1.0 / static_cast<double>(n);
  double sum = 0.0;
  for (const double x : sample) sum += x;
  const double mean = sum * inv_n;

  double sq = 0.0;
  double abs_dev = 0.0;
  for (const double x : sample) {
    const double dx = x - mean;
    sq += dx * dx;
    abs_dev += std::abs(dx);
  }
  const double volatility = std::sqrt(sq * inv_n);
  if (!(volatility > 0.0)) throw NumericError("zero dispersion");

  scratch.assign(sample.begin(), sample.end());
  const auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(scratch.begin(), mid, scratch.end());
  double median = *mid;
  if (n % 2 == 0) median = 0.5 * (*std::max_element(scratch.begin(), mid) + median);

  RobustMoments m;
  m.mean = mean;
  m.volatility = volatility;
  m.median = median;
  m.skewness = 6.0 / volatility * (mean - median);
  const double ratio = abs_dev * inv_n / volatility;
  m.kurtosis = 24.0 * (1.0 - std::sqrt(std::numbers::pi / 2.0) * ratio);
  if (mode == KurtosisMode::with_skew_term) m.kurtosis += m.skewness * m.skewness;
  return m;
}

}  // namespace intraday
