#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>

#include "intraday/binning.hpp"
#include "intraday/moments.hpp"
#include "intraday/observables.hpp"
#include "intraday/spectrum.hpp"
#include "intraday/synth.hpp"
#include "test_support.hpp"

using namespace intraday;

// The OpenMP path must reproduce the serial reference bit for bit, whatever
// the thread count.

namespace {

bool bitwise_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same(const std::optional<RobustMoments>& a, const std::optional<RobustMoments>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return bitwise_equal(a->mean, b->mean) && bitwise_equal(a->volatility, b->volatility) &&
         bitwise_equal(a->skewness, b->skewness) && bitwise_equal(a->kurtosis, b->kurtosis) &&
         bitwise_equal(a->median, b->median);
}

const SynthData& data() {
  static const SynthData d = [] {
    SynthConfig c;
    c.stocks = 25;
    c.days = 10;
    c.close = c.open + 30 * 60'000;
    c.ticks_per_minute = 4;
    c.beta = 0.4;
    c.seed = 21;
    return generate(c, Execution::serial);
  }();
  return d;
}

}  // namespace

TEST_CASE("serial and parallel kernels agree bitwise") {
  const SessionSpec spec = testing::short_session(30, 60);
  const PricePanel ref = build_panel(data().store, spec, {}, Execution::serial);
  const ObservablePanel ref_r = compute_returns(ref);
  const auto ref_ss = single_stock_moments(ref_r, KurtosisMode::with_skew_term, Execution::serial);
  const auto ref_cs = cross_section_moments(ref_r, KurtosisMode::with_skew_term, Execution::serial);
  const ObservablePanel ref_z = normalize_returns(ref_r, ref_cs);
  const std::vector<SubsetRequest> req{{"all", 25, SubsetMode::first}, {"r1", 12, SubsetMode::random}};
  const auto subsets = draw_subsets(25, req, 3);
  const auto ref_sp = spectrum_curves(ref_z, subsets, 4, Execution::serial);

  for (const int threads : {1, 2, 4}) {
    CAPTURE(threads);
    set_thread_count(threads);
    const PricePanel p = build_panel(data().store, spec, {}, Execution::parallel);
    for (std::size_t a = 0; a < p.stock_count(); ++a)
      for (std::size_t t = 0; t < p.day_count(); ++t) {
        REQUIRE(p.included(a, t) == ref.included(a, t));
        for (std::size_t k = 0; k < p.bin_count(); ++k) CHECK(bitwise_equal(p.price(a, t, k), ref.price(a, t, k)));
      }

    const ObservablePanel r = compute_returns(p);
    const auto ss = single_stock_moments(r, KurtosisMode::with_skew_term, Execution::parallel);
    const auto cs = cross_section_moments(r, KurtosisMode::with_skew_term, Execution::parallel);
    for (std::size_t k = 0; k < r.bin_count(); ++k) {
      for (std::size_t a = 0; a < r.stock_count(); ++a) CHECK(same(ss.cell(a, k), ref_ss.cell(a, k)));
      for (std::size_t t = 0; t < r.day_count(); ++t) CHECK(same(cs.cell(k, t), ref_cs.cell(k, t)));
    }

    const auto sp = spectrum_curves(normalize_returns(r, cs), subsets, 4, Execution::parallel);
    for (std::size_t s = 0; s < sp.size(); ++s)
      for (std::size_t k = 0; k < sp[s].bins.size(); ++k) {
        REQUIRE(sp[s].bins[k].has_value() == ref_sp[s].bins[k].has_value());
        if (!sp[s].bins[k]) continue;
        CHECK(bitwise_equal(sp[s].bins[k]->mean_offdiag, ref_sp[s].bins[k]->mean_offdiag));
        for (std::size_t i = 0; i < 4; ++i)
          CHECK(bitwise_equal(sp[s].bins[k]->eigenvalues[i], ref_sp[s].bins[k]->eigenvalues[i]));
      }

    const SynthData again = generate(SynthConfig{.stocks = 6, .days = 3, .seed = 5}, Execution::parallel);
    const SynthData serial = generate(SynthConfig{.stocks = 6, .days = 3, .seed = 5}, Execution::serial);
    REQUIRE(again.store.tick_count() == serial.store.tick_count());
    CHECK(again.truth.emission_counts == serial.truth.emission_counts);
  }
}

TEST_CASE("errors from parallel regions are reported deterministically") {
  set_thread_count(4);
  std::string message;
  try {
    for_each_index(Execution::parallel, 100, [](std::size_t i) {
      if (i % 7 == 3) throw std::runtime_error("cell " + std::to_string(i));
    });
  } catch (const std::exception& e) {
    message = e.what();
  }
  CHECK(message == "cell 3");
}
