#pragma once

// Per-bin stock correlation matrices of normalized returns and their spectra.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intraday/eigen.hpp"
#include "intraday/observables.hpp"
#include "intraday/parallel.hpp"

namespace intraday {

enum class SubsetMode { first, random };

struct SubsetRequest {
  std::string label;
  std::size_t size = 0;
  SubsetMode mode = SubsetMode::first;
};

struct StockSubset {
  std::string label;
  std::vector<std::size_t> members;  // distinct universe indices
  SubsetMode mode = SubsetMode::first;
  std::uint64_t seed = 0;  // stream seed used for random draws, 0 for `first`

  std::size_t size() const { return members.size(); }
};

/// Parses `label:first|rand:size[,...]`. Throws UsageError.
std::vector<SubsetRequest> parse_subset_requests(std::string_view text);

/// `first` takes the first N0 stocks in universe order; `random` draws N0
/// distinct stocks uniformly without replacement from a stream derived from
/// (seed, request index). Members are returned in ascending order. Throws
/// UsageError when a size exceeds the universe.
std::vector<StockSubset> draw_subsets(std::size_t universe, std::span<const SubsetRequest> requests,
                                      std::uint64_t seed);

/// Correlation over days of the subset members at bin k. Each pair uses the
/// days on which both stocks are included. Throws NumericError naming the
/// stock when a member has fewer than 2 usable days or zero dispersion.
SymmetricMatrix correlation_matrix(const ObservablePanel& normalized, std::size_t k, const StockSubset& subset);

/// Mean of the off-diagonal entries.
double mean_offdiagonal(const SymmetricMatrix& c);

struct BinSpectrum {
  std::vector<double> eigenvalues;  // largest first, at most top_count
  double mean_offdiag = 0.0;
};

struct SpectrumCurves {
  StockSubset subset;
  std::size_t universe = 0;
  std::vector<Millis> bin_times;
  std::vector<std::optional<BinSpectrum>> bins;  // gaps where the bin failed
  std::vector<std::string> errors;               // reason per gap, empty otherwise

  /// lambda_1 / N (universe size) for bin k.
  std::optional<double> top_over_universe(std::size_t k) const;
  /// lambda_1 / N0 (subset size) for bin k.
  std::optional<double> top_over_subset(std::size_t k) const;
};

std::vector<SpectrumCurves> spectrum_curves(const ObservablePanel& normalized, std::span<const StockSubset> subsets,
                                            std::size_t top_count, Execution exec = Execution::parallel);

/// CSV `bin_index,subset,eig_rank,eigenvalue,eig_over_N,eig_over_N0`.
void write_spectrum_csv(std::ostream& out, std::span<const SpectrumCurves> curves);
/// CSV `bin_index,subset,mean_offdiag`.
void write_correlation_summary_csv(std::ostream& out, std::span<const SpectrumCurves> curves);

}  // namespace intraday
