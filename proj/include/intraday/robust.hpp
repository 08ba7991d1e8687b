#pragma once

// Four-moment summary of a sample using median-based skewness and
// mean-absolute-deviation-based kurtosis. Both vanish for a Gaussian.

#include <span>
#include <vector>

namespace intraday {

struct RobustMoments {
  double mean = 0.0;
  double volatility = 0.0;  // population form, divisor n
  double skewness = 0.0;    // 6 (mean - median) / volatility
  double kurtosis = 0.0;    // 24 (1 - sqrt(pi/2) <|x - mean|> / volatility) [+ skewness^2]
  double median = 0.0;      // midpoint of the two central values for even n
};

enum class KurtosisMode {
  with_skew_term,  // adds skewness^2, as in the single-stock definition
  literal,         // cross-sectional form without the skewness^2 term
};

/// Throws NumericError when the sample has fewer than 2 values or zero
/// dispersion (all values identical).
RobustMoments robust_moments(std::span<const double> sample, KurtosisMode mode = KurtosisMode::with_skew_term);

/// Same, reusing `scratch` for the median selection.
RobustMoments robust_moments(std::span<const double> sample, KurtosisMode mode, std::vector<double>& scratch);

}  // namespace intraday
