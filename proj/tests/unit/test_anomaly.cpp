#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "intraday/anomaly.hpp"
#include "intraday/binning.hpp"
#include "intraday/error.hpp"
#include "intraday/moments.hpp"
#include "intraday/observables.hpp"
#include "intraday/synth.hpp"
#include "test_support.hpp"

using namespace intraday;

namespace {

const std::vector<Statistic> kMeanVol{Statistic::mean, Statistic::volatility};

/// Cross-section moments whose mean path is `means[t][k]` and volatility `vols[t][k]`.
CrossSectionMoments paths(const std::vector<std::vector<double>>& means, const std::vector<std::vector<double>>& vols) {
  const std::size_t d = means.size(), bins = means[0].size();
  std::vector<Date> dates;
  for (std::size_t t = 0; t < d; ++t) dates.push_back(Date{static_cast<std::int32_t>(15034 + t)});
  std::vector<Millis> times;
  for (std::size_t k = 0; k < bins; ++k) times.push_back(static_cast<Millis>(k + 1) * 60'000);
  std::vector<std::optional<RobustMoments>> cells(bins * d);
  for (std::size_t k = 0; k < bins; ++k)
    for (std::size_t t = 0; t < d; ++t) {
      RobustMoments m;
      m.mean = means[t][k];
      m.volatility = vols[t][k];
      cells[k * d + t] = m;
    }
  return CrossSectionMoments(dates, times, cells, std::vector<std::size_t>(bins * d, 10));
}

std::vector<std::vector<double>> noise(std::size_t d, std::size_t bins, double level, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, level);
  std::vector<std::vector<double>> out(d, std::vector<double>(bins));
  for (auto& row : out)
    for (auto& v : row) v = 1.0 + g(rng);
  return out;
}

/// Independent formula for one (entity, statistic) score.
double oracle(const std::vector<std::vector<double>>& x, std::size_t t) {
  double sum = 0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < x[0].size(); ++k) {
    double m = 0;
    std::size_t n = 0;
    for (std::size_t u = 0; u < x.size(); ++u)
      if (u != t) m += x[u][k], ++n;
    m /= static_cast<double>(n);
    double v = 0;
    for (std::size_t u = 0; u < x.size(); ++u)
      if (u != t) v += (x[u][k] - m) * (x[u][k] - m);
    const double sd = std::sqrt(v / static_cast<double>(n));
    if (sd == 0) continue;
    sum += (x[t][k] - m) * (x[t][k] - m) / (sd * sd);
    ++used;
  }
  return std::sqrt(sum / static_cast<double>(used));
}

SynthConfig month(std::uint64_t seed) {
  SynthConfig c;
  c.stocks = 30;
  c.days = 22;
  c.close = c.open + 60 * 60'000;
  c.ticks_per_minute = 6;
  c.beta = 0.3;
  c.seed = seed;
  return c;
}

AnomalyReport crash_report(double magnitude, std::uint64_t seed) {
  SynthConfig c = month(seed);
  c.injections.push_back({AnomalyKind::crash_day, 10, magnitude});
  const PricePanel p = build_panel(generate(c).store, testing::short_session(60, 300));
  return day_scores(cross_section_moments(compute_relative_prices(p)), kMeanVol);
}

}  // namespace

TEST_CASE("scores match an independent leave-one-out formula") {
  const auto means = noise(6, 5, 0.1, 1);
  const auto vols = noise(6, 5, 0.2, 2);
  const AnomalyReport r = day_scores(paths(means, vols), kMeanVol);
  REQUIRE(r.scores.size() == 6);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(*r.scores[t].per_statistic[0] == doctest::Approx(oracle(means, t)).epsilon(1e-12));
    CHECK(*r.scores[t].per_statistic[1] == doctest::Approx(oracle(vols, t)).epsilon(1e-12));
    CHECK(*r.scores[t].combined ==
          doctest::Approx((oracle(means, t) + oracle(vols, t)) / 2.0).epsilon(1e-12));
    CHECK(*r.scores[t].combined >= 0.0);
  }
  std::vector<std::size_t> ranks;
  for (const auto& s : r.scores) ranks.push_back(s.rank);
  std::sort(ranks.begin(), ranks.end());
  for (std::size_t i = 0; i < 6; ++i) CHECK(ranks[i] == i + 1);
}

TEST_CASE("a day equal to its leave-one-out reference scores 0") {
  auto means = noise(5, 4, 0.1, 3);
  auto vols = noise(5, 4, 0.1, 4);
  for (std::size_t k = 0; k < 4; ++k) {
    means[0][k] = (means[1][k] + means[2][k] + means[3][k] + means[4][k]) / 4.0;
    vols[0][k] = (vols[1][k] + vols[2][k] + vols[3][k] + vols[4][k]) / 4.0;
  }
  const AnomalyReport r = day_scores(paths(means, vols), kMeanVol);
  CHECK(*r.scores[0].per_statistic[0] < 1e-12);
  CHECK(*r.scores[0].per_statistic[1] < 1e-12);
  CHECK(r.scores[0].rank == 5);
}

TEST_CASE("zero-spread bins are skipped and identical days have no score") {
  const std::vector<std::vector<double>> same(4, std::vector<double>{1.0, 2.0});
  const AnomalyReport r = day_scores(paths(same, same), kMeanVol);
  for (const auto& s : r.scores) {
    CHECK_FALSE(s.per_statistic[0]);
    CHECK(s.skipped_bins[0] == 2);
    CHECK_FALSE(s.combined);
  }
}

TEST_CASE("too few entities") {
  const auto two = noise(2, 3, 0.1, 5);
  CHECK_THROWS_AS(day_scores(paths(two, two), kMeanVol), DataError);
  const ObservablePanel obs = testing::random_observable(ObservableKind::relative_prices, 2, 5, 3, 6);
  CHECK_THROWS_AS(stock_scores(single_stock_moments(obs), kMeanVol), DataError);
}

TEST_CASE("scores are invariant under day permutation") {
  const auto means = noise(7, 5, 0.1, 7);
  const auto vols = noise(7, 5, 0.1, 8);
  std::vector<std::size_t> order{4, 2, 6, 0, 1, 5, 3};
  std::vector<std::vector<double>> pm, pv;
  for (const auto t : order) {
    pm.push_back(means[t]);
    pv.push_back(vols[t]);
  }
  const AnomalyReport a = day_scores(paths(means, vols), kMeanVol);
  const AnomalyReport b = day_scores(paths(pm, pv), kMeanVol);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(*b.scores[i].combined == doctest::Approx(*a.scores[order[i]].combined).epsilon(1e-12));
    CHECK(b.scores[i].rank == a.scores[order[i]].rank);
  }
}

TEST_CASE("injected crash day ranks first and grows with the crash") {
  const AnomalyReport r = crash_report(0.05, 12);
  CHECK(r.top() == 10);
  CHECK(r.entity_ids[10] == format_date(Date{15034 + 14}));  // 11th weekday from 2011-03-01
  double previous = 0.0;
  for (const double m : {0.02, 0.04, 0.08}) {
    const double score = *crash_report(m, 12).scores[10].combined;
    CHECK(score >= previous);
    previous = score;
  }
}

TEST_CASE("rogue stock ranks first; null scores are exchangeable") {
  SynthConfig c = month(13);
  c.injections.push_back({AnomalyKind::rogue_stock, 7, 5.0});
  const PricePanel p = build_panel(generate(c).store, testing::short_session(60, 300));
  const AnomalyReport r = stock_scores(single_stock_moments(compute_relative_prices(p)), kMeanVol);
  CHECK(r.kind == EntityKind::stock);
  CHECK(r.top() == 7);
  CHECK(r.scores[7].statistic_ranks[1] == 1);

  const PricePanel null = build_panel(generate(month(14)).store, testing::short_session(60, 300));
  const std::vector<Statistic> mean_only{Statistic::mean};
  const AnomalyReport n = stock_scores(single_stock_moments(compute_relative_prices(null)), mean_only);
  double lo = INFINITY, hi = 0;
  std::vector<double> all;
  for (const auto& s : n.scores) {
    lo = std::min(lo, *s.combined);
    hi = std::max(hi, *s.combined);
    all.push_back(*s.combined);
  }
  // Scores are RMS of roughly unit z-values over 12 bins.
  std::sort(all.begin(), all.end());
  CHECK(hi / lo < 6.0);
  CHECK(all[all.size() / 2] > 0.5);
  CHECK(all[all.size() / 2] < 1.5);
}

TEST_CASE("report CSV") {
  const auto means = noise(3, 2, 0.1, 9);
  const AnomalyReport r = day_scores(paths(means, means), std::vector<Statistic>{Statistic::mean});
  std::ostringstream out;
  write_anomaly_csv(out, r);
  const std::string text = out.str();
  CHECK(text.rfind("entity_kind,entity_id,statistic,score,rank\nday,2011-03-01,mean,", 0) == 0);
  CHECK(text.find("day,2011-03-03,combined,") != std::string::npos);
}
