#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "intraday/eigen.hpp"
#include "intraday/error.hpp"
#include "intraday/spectrum.hpp"
#include "test_support.hpp"

using namespace intraday;

namespace {

ObservablePanel normalized_from(std::size_t n, std::size_t d, std::size_t bins, const std::vector<double>& values,
                                std::vector<unsigned char> included = {}) {
  std::vector<std::string> symbols;
  for (std::size_t a = 0; a < n; ++a) symbols.push_back("S" + std::to_string(a));
  std::vector<Date> dates;
  for (std::size_t t = 0; t < d; ++t) dates.push_back(Date{static_cast<std::int32_t>(t)});
  std::vector<Millis> times;
  for (std::size_t k = 0; k < bins; ++k) times.push_back(static_cast<Millis>(k + 1) * 60'000);
  if (included.empty()) included.assign(n * d, 1);
  return ObservablePanel(ObservableKind::normalized_returns, symbols, dates, times, values, included, 60);
}

/// One-factor panel: x = beta f(t,k) + sqrt(1 - beta^2) e(a,t,k).
ObservablePanel one_factor(std::size_t n, std::size_t d, std::size_t bins, double beta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> f(d * bins);
  for (auto& v : f) v = g(rng);
  std::vector<double> values(n * d * bins);
  const double w = std::sqrt(1.0 - beta * beta);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t t = 0; t < d; ++t)
      for (std::size_t k = 0; k < bins; ++k) values[(a * d + t) * bins + k] = beta * f[t * bins + k] + w * g(rng);
  return normalized_from(n, d, bins, values);
}

StockSubset everyone(std::size_t n) {
  const std::vector<SubsetRequest> req{{"all", n, SubsetMode::first}};
  return draw_subsets(n, req, 0).front();
}

}  // namespace

TEST_CASE("identical and negated series") {
  const ObservablePanel same = normalized_from(2, 4, 1, {1, 2, 0, 5, 1, 2, 0, 5});
  const SymmetricMatrix c = correlation_matrix(same, 0, everyone(2));
  CHECK(c(0, 0) == 1.0);
  CHECK(std::abs(c(0, 1) - 1.0) < 1e-14);
  CHECK(c(1, 0) == c(0, 1));
  const ObservablePanel neg = normalized_from(2, 4, 1, {1, 2, 0, 5, -1, -2, 0, -5});
  CHECK(std::abs(correlation_matrix(neg, 0, everyone(2))(0, 1) + 1.0) < 1e-14);
}

TEST_CASE("independent stocks have small correlations") {
  const std::size_t d = 400;
  const ObservablePanel obs = one_factor(30, d, 1, 0.0, 4);
  const SymmetricMatrix c = correlation_matrix(obs, 0, everyone(30));
  std::size_t big = 0, total = 0;
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = i + 1; j < 30; ++j) {
      ++total;
      if (std::abs(c(i, j)) >= 3.0 / std::sqrt(static_cast<double>(d))) ++big;
    }
  CHECK(big <= total / 100 + 1);
}

TEST_CASE("degenerate members are named") {
  // S1 is constant over days at bin 0.
  const ObservablePanel flat = normalized_from(2, 3, 1, {1, 2, 3, 4, 4, 4});
  try {
    correlation_matrix(flat, 0, everyone(2));
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("S1") != std::string::npos);
  }
  // S0 has a single included day.
  const ObservablePanel thin = normalized_from(2, 3, 1, {1, NAN, NAN, 4, 5, 6}, {1, 0, 0, 1, 1, 1});
  try {
    correlation_matrix(thin, 0, everyone(2));
    FAIL("expected a numeric error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("S0") != std::string::npos);
  }
}

TEST_CASE("pairwise complete-case rule with missing days") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  const std::size_t n = 4, d = 12;
  std::vector<double> values(n * d);
  std::vector<unsigned char> inc(n * d, 1);
  for (auto& v : values) v = g(rng);
  inc[0 * d + 3] = 0;
  inc[1 * d + 7] = 0;
  inc[2 * d + 3] = 0;
  for (std::size_t c = 0; c < n * d; ++c)
    if (!inc[c]) values[c] = NAN;
  const ObservablePanel obs = normalized_from(n, d, 1, values, inc);
  const SymmetricMatrix c = correlation_matrix(obs, 0, everyone(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::vector<double> x, y;
      for (std::size_t t = 0; t < d; ++t)
        if (inc[a * d + t] && inc[b * d + t]) {
          x.push_back(values[a * d + t]);
          y.push_back(values[b * d + t]);
        }
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
      mx /= static_cast<double>(x.size());
      my /= static_cast<double>(y.size());
      double sxy = 0, sxx = 0, syy = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
      }
      CHECK(std::abs(c(a, b) - sxy / std::sqrt(sxx * syy)) < 1e-12);
    }
}

TEST_CASE("mean off-diagonal computed two ways; trace and bounds") {
  const ObservablePanel obs = one_factor(25, 60, 2, 0.5, 6);
  const SymmetricMatrix c = correlation_matrix(obs, 1, everyone(25));
  double sum = 0;
  for (const double v : c.data()) sum += v;
  CHECK(std::abs(mean_offdiagonal(c) - (sum - 25.0) / (25.0 * 24.0)) < 1e-10);
  for (std::size_t i = 0; i < 25; ++i) CHECK(std::abs(c(i, i) - 1.0) < 1e-10);
  CHECK(c.asymmetry() == 0.0);
  const EigenResult r = eigen_spectrum(c);
  double total = 0;
  for (const double v : r.values) total += v;
  CHECK(std::abs(total - 25.0) < 1e-8);
  CHECK(r.values.front() <= 25.0);
}

TEST_CASE("member order permutes the matrix and keeps the spectrum") {
  const ObservablePanel obs = one_factor(12, 50, 1, 0.4, 7);
  StockSubset a = everyone(12);
  StockSubset b = a;
  std::mt19937_64 rng(8);
  std::shuffle(b.members.begin(), b.members.end(), rng);
  const SymmetricMatrix ca = correlation_matrix(obs, 0, a);
  const SymmetricMatrix cb = correlation_matrix(obs, 0, b);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) CHECK(std::abs(cb(i, j) - ca(b.members[i], b.members[j])) < 1e-12);
  const auto ea = eigen_spectrum(ca).values;
  const auto eb = eigen_spectrum(cb).values;
  for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(ea[i] - eb[i]) < 1e-10);
}

TEST_CASE("perfectly correlated bins: top eigenvalue equals the subset size") {
  std::vector<double> values;
  const std::size_t n = 5, d = 6, bins = 3;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t t = 0; t < d; ++t)
      for (std::size_t k = 0; k < bins; ++k) values.push_back(std::sin(static_cast<double>(t * 7 + k)));
  const ObservablePanel obs = normalized_from(n, d, bins, values);
  const std::vector<StockSubset> subsets{everyone(n)};
  const auto curves = spectrum_curves(obs, subsets, 3);
  for (std::size_t k = 0; k < bins; ++k) {
    REQUIRE(curves[0].bins[k]);
    CHECK(std::abs(*curves[0].top_over_subset(k) - 1.0) < 1e-10);
    CHECK(std::abs(curves[0].bins[k]->eigenvalues[1]) < 1e-10);
    CHECK(std::abs(curves[0].bins[k]->eigenvalues[2]) < 1e-10);
    CHECK(std::abs(curves[0].bins[k]->mean_offdiag - 1.0) < 1e-10);
  }
}

TEST_CASE("one-factor market: equicorrelation formula and subset collapse") {
  const double beta = 0.6, rho = beta * beta;
  const ObservablePanel obs = one_factor(120, 1500, 3, beta, 9);
  const std::vector<SubsetRequest> req{{"r1", 50, SubsetMode::random}, {"r2", 50, SubsetMode::random}};
  const auto subsets = draw_subsets(120, req, 10);
  const auto curves = spectrum_curves(obs, subsets, 2);
  for (std::size_t k = 0; k < 3; ++k) {
    const double a = *curves[0].top_over_subset(k);
    const double b = *curves[1].top_over_subset(k);
    CHECK(std::abs(a - (rho + (1.0 - rho) / 50.0)) < 0.02);
    CHECK(std::abs(a - b) < 0.05);
    CHECK(*curves[0].top_over_universe(k) == doctest::Approx(a * 50.0 / 120.0));
  }
}

TEST_CASE("failed bins become gaps with a reason") {
  // Bin 1 is constant for S0 over days.
  const ObservablePanel obs = normalized_from(2, 3, 2, {1, 5, 2, 5, 3, 5, 3, 1, 1, 2, 2, 2});
  const std::vector<StockSubset> subsets{everyone(2)};
  const auto curves = spectrum_curves(obs, subsets, 2);
  CHECK(curves[0].bins[0]);
  CHECK_FALSE(curves[0].bins[1]);
  CHECK(curves[0].errors[1].find("S0") != std::string::npos);
  std::ostringstream summary;
  write_correlation_summary_csv(summary, curves);
  CHECK(summary.str().find("2,all,\n") != std::string::npos);
}

TEST_CASE("subset requests and draws") {
  const auto req = parse_subset_requests("r0:first:100,r1:rand:100,r3:random:200");
  REQUIRE(req.size() == 3);
  CHECK(req[2].mode == SubsetMode::random);
  CHECK_THROWS_AS(parse_subset_requests("r0:first"), UsageError);
  CHECK_THROWS_AS(parse_subset_requests("r0:some:10"), UsageError);
  CHECK_THROWS_AS(parse_subset_requests("r0:first:0"), UsageError);

  const auto s = draw_subsets(500, req, 77);
  for (std::size_t i = 0; i < 100; ++i) CHECK(s[0].members[i] == i);
  CHECK(s[0].seed == 0);
  const auto again = draw_subsets(500, req, 77);
  CHECK(again[1].members == s[1].members);
  CHECK(again[2].members == s[2].members);
  CHECK(draw_subsets(500, req, 78)[1].members != s[1].members);
  CHECK(std::set<std::size_t>(s[2].members.begin(), s[2].members.end()).size() == 200);
  CHECK(s[2].members.back() < 500);
  CHECK_THROWS_AS(draw_subsets(150, req, 1), UsageError);
}

TEST_CASE("random draws are uniform without replacement") {
  const std::vector<SubsetRequest> req{{"r3", 200, SubsetMode::random}};
  std::vector<double> counts(500, 0.0);
  const int draws = 10'000;
  for (int seed = 0; seed < draws; ++seed) {
    const auto s = draw_subsets(500, req, static_cast<std::uint64_t>(seed));
    REQUIRE(std::set<std::size_t>(s[0].members.begin(), s[0].members.end()).size() == 200);
    for (const auto m : s[0].members) counts[m] += 1.0;
  }
  // Each index is picked with probability 0.4; the chi-square statistic of
  // the pick counts has mean about 0.6 * 499 under uniform sampling.
  const double expected = draws * 0.4;
  double chi2 = 0;
  for (const double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 / 499.0 < 0.6 * 1.3);
  CHECK(chi2 / 499.0 > 0.6 * 0.7);
}
