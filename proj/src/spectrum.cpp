#include "intraday/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "intraday/csv_format.hpp"
#include "intraday/error.hpp"
#include "intraday/rng.hpp"

namespace intraday {

std::vector<SubsetRequest> parse_subset_requests(std::string_view text) {
  std::vector<SubsetRequest> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text.remove_prefix(comma == std::string_view::npos ? text.size() : comma + 1);
    const auto c1 = item.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw UsageError("subset `" + std::string(item) + "` must look like label:first|rand:size");
    }
    SubsetRequest req;
    req.label = std::string(item.substr(0, c1));
    const auto mode = item.substr(c1 + 1, c2 - c1 - 1);
    if (mode == "first") {
      req.mode = SubsetMode::first;
    } else if (mode == "rand" || mode == "random") {
      req.mode = SubsetMode::random;
    } else {
      throw UsageError("subset mode must be `first` or `rand`, got `" + std::string(mode) + "`");
    }
    const auto size = item.substr(c2 + 1);
    auto [ptr, ec] = std::from_chars(size.data(), size.data() + size.size(), req.size);
    if (req.label.empty() || ec != std::errc{} || ptr != size.data() + size.size() || req.size == 0) {
      throw UsageError("bad subset `" + std::string(item) + "`");
    }
    out.push_back(std::move(req));
  }
  return out;
}

std::vector<StockSubset> draw_subsets(std::size_t universe, std::span<const SubsetRequest> requests,
                                      std::uint64_t seed) {
  std::vector<StockSubset> out;
  std::vector<std::size_t> all(universe);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& req = requests[i];
    if (req.size > universe) {
      throw UsageError("subset " + req.label + " asks for " + std::to_string(req.size) + " stocks but the universe has " +
                       std::to_string(universe));
    }
    StockSubset subset{req.label, {}, req.mode, 0};
    if (req.mode == SubsetMode::first) {
      subset.members.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(req.size));
    } else {
      subset.seed = derive_seed({seed, i});
      std::mt19937_64 rng(subset.seed);
      subset.members.reserve(req.size);
      std::sample(all.begin(), all.end(), std::back_inserter(subset.members), req.size, rng);
    }
    out.push_back(std::move(subset));
  }
  return out;
}

namespace {

struct PairMoments {
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  std::size_t days = 0;
};

PairMoments pair_moments(const ObservablePanel& obs, std::size_t k, std::size_t a, std::size_t b) {
  PairMoments out;
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t t = 0; t < obs.day_count(); ++t) {
    if (!obs.included(a, t) || !obs.included(b, t)) continue;
    sum_a += obs.value(a, t, k);
    sum_b += obs.value(b, t, k);
    ++out.days;
  }
  if (out.days < 2) return out;
  const double n = static_cast<double>(out.days);
  const double mean_a = sum_a / n;
  const double mean_b = sum_b / n;
  for (std::size_t t = 0; t < obs.day_count(); ++t) {
    if (!obs.included(a, t) || !obs.included(b, t)) continue;
    const double da = obs.value(a, t, k) - mean_a;
    const double db = obs.value(b, t, k) - mean_b;
    out.cov += da * db;
    out.var_a += da * da;
    out.var_b += db * db;
  }
  out.cov /= n;
  out.var_a /= n;
  out.var_b /= n;
  return out;
}

}  // namespace

SymmetricMatrix correlation_matrix(const ObservablePanel& normalized, std::size_t k, const StockSubset& subset) {
  if (k >= normalized.bin_count()) throw UsageError("bin index out of range");
  const std::size_t m = subset.size();
  const std::size_t d = normalized.day_count();
  for (const auto a : subset.members) {
    if (a >= normalized.stock_count()) throw UsageError("subset member outside the universe");
  }

  // Per-member validity on its own included days.
  for (const auto a : subset.members) {
    std::size_t days = 0;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t t = 0; t < d; ++t) {
      if (!normalized.included(a, t)) continue;
      ++days;
      lo = std::min(lo, normalized.value(a, t, k));
      hi = std::max(hi, normalized.value(a, t, k));
    }
    const std::string& name = normalized.symbols()[a];
    if (days < 2) {
      throw NumericError("stock " + name + " has " + std::to_string(days) + " included days at bin " +
                         std::to_string(k + 1) + "; need at least 2");
    }
    if (lo == hi) throw NumericError("stock " + name + " has zero dispersion at bin " + std::to_string(k + 1));
  }

  bool same_days = true;
  for (std::size_t i = 1; i < m && same_days; ++i) {
    for (std::size_t t = 0; t < d; ++t) {
      if (normalized.included(subset.members[i], t) != normalized.included(subset.members[0], t)) {
        same_days = false;
        break;
      }
    }
  }

  SymmetricMatrix c(m);
  for (std::size_t i = 0; i < m; ++i) c(i, i) = 1.0;

  if (same_days) {
    // Common day set: center and scale each member once, then take dot products.
    std::vector<std::size_t> days;
    for (std::size_t t = 0; t < d; ++t)
      if (m > 0 && normalized.included(subset.members[0], t)) days.push_back(t);
    const std::size_t n = days.size();
    std::vector<double> z(m * n);
    for (std::size_t i = 0; i < m; ++i) {
      const auto a = subset.members[i];
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += normalized.value(a, days[j], k);
      const double mean = sum / static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double dx = normalized.value(a, days[j], k) - mean;
        z[i * n + j] = dx;
        ss += dx * dx;
      }
      const double scale = 1.0 / std::sqrt(ss);
      for (std::size_t j = 0; j < n; ++j) z[i * n + j] *= scale;
    }
    for (std::size_t i = 0; i < m; ++i) {
      const double* zi = &z[i * n];
      for (std::size_t j = i + 1; j < m; ++j) {
        const double* zj = &z[j * n];
        double dot = 0.0;
        for (std::size_t t = 0; t < n; ++t) dot += zi[t] * zj[t];
        c(i, j) = dot;
        c(j, i) = dot;
      }
    }
    return c;
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto a = subset.members[i];
      const auto b = subset.members[j];
      const PairMoments pm = pair_moments(normalized, k, a, b);
      if (pm.days < 2) {
        throw NumericError("stocks " + normalized.symbols()[a] + " and " + normalized.symbols()[b] +
                           " share fewer than 2 included days at bin " + std::to_string(k + 1));
      }
      if (!(pm.var_a > 0.0) || !(pm.var_b > 0.0)) {
        const auto bad = pm.var_a > 0.0 ? b : a;
        throw NumericError("stock " + normalized.symbols()[bad] + " has zero dispersion on the days shared with " +
                           normalized.symbols()[bad == a ? b : a] + " at bin " + std::to_string(k + 1));
      }
      const double r = pm.cov / std::sqrt(pm.var_a * pm.var_b);
      c(i, j) = r;
      c(j, i) = r;
    }
  }
  return c;
}

double mean_offdiagonal(const SymmetricMatrix& c) {
  const std::size_t m = c.size();
  if (m < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j) sum += c(i, j);
  return sum / static_cast<double>(m * (m - 1));
}

std::optional<double> SpectrumCurves::top_over_universe(std::size_t k) const {
  if (!bins[k] || bins[k]->eigenvalues.empty()) return std::nullopt;
  return bins[k]->eigenvalues.front() / static_cast<double>(universe);
}

std::optional<double> SpectrumCurves::top_over_subset(std::size_t k) const {
  if (!bins[k] || bins[k]->eigenvalues.empty()) return std::nullopt;
  return bins[k]->eigenvalues.front() / static_cast<double>(subset.size());
}

std::vector<SpectrumCurves> spectrum_curves(const ObservablePanel& normalized, std::span<const StockSubset> subsets,
                                            std::size_t top_count, Execution exec) {
  const std::size_t bins = normalized.bin_count();
  std::vector<SpectrumCurves> out;
  for (const auto& s : subsets) {
    SpectrumCurves c;
    c.subset = s;
    c.universe = normalized.stock_count();
    c.bin_times.assign(normalized.bin_times().begin(), normalized.bin_times().end());
    c.bins.resize(bins);
    c.errors.resize(bins);
    out.push_back(std::move(c));
  }

  // One task per (subset, bin); the solver itself is single-threaded.
  for_each_index(exec, subsets.size() * bins, [&](std::size_t cell) {
    const std::size_t s = cell / bins;
    const std::size_t k = cell % bins;
    try {
      const SymmetricMatrix c = correlation_matrix(normalized, k, subsets[s]);
      EigenResult eig = eigen_spectrum(c);
      eig.values.resize(std::min(top_count, eig.values.size()));
      out[s].bins[k] = BinSpectrum{std::move(eig.values), mean_offdiagonal(c)};
    } catch (const NumericError& e) {
      out[s].errors[k] = e.what();
    }
  });
  return out;
}

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumCurves> curves) {
  out << "bin_index,subset,eig_rank,eigenvalue,eig_over_N,eig_over_N0\n";
  if (curves.empty()) return;
  std::string line;
  for (std::size_t k = 0; k < curves.front().bins.size(); ++k) {
    for (const auto& c : curves) {
      if (!c.bins[k]) continue;
      const auto& eig = c.bins[k]->eigenvalues;
      for (std::size_t r = 0; r < eig.size(); ++r) {
        line = std::to_string(k + 1) + "," + c.subset.label + "," + std::to_string(r + 1) + ",";
        append_number(line, eig[r]);
        line.push_back(',');
        append_number(line, eig[r] / static_cast<double>(c.universe));
        line.push_back(',');
        append_number(line, eig[r] / static_cast<double>(c.subset.size()));
        line.push_back('\n');
        out << line;
      }
    }
  }
}

void write_correlation_summary_csv(std::ostream& out, std::span<const SpectrumCurves> curves) {
  out << "bin_index,subset,mean_offdiag\n";
  if (curves.empty()) return;
  std::string line;
  for (std::size_t k = 0; k < curves.front().bins.size(); ++k) {
    for (const auto& c : curves) {
      line = std::to_string(k + 1) + "," + c.subset.label + ",";
      if (c.bins[k]) append_number(line, c.bins[k]->mean_offdiag);
      line.push_back('\n');
      out << line;
    }
  }
}

}  // namespace intraday
