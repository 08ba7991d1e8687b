// Serial vs OpenMP timings of the binning, moment and spectrum kernels on a
// synthetic panel.
//
//   bench_kernels [stocks] [days] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "intraday/binning.hpp"
#include "intraday/moments.hpp"
#include "intraday/observables.hpp"
#include "intraday/spectrum.hpp"
#include "intraday/synth.hpp"

using namespace intraday;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, const std::function<void(Execution)>& fn) {
  const double serial = seconds([&] { fn(Execution::serial); });
  const double parallel = seconds([&] { fn(Execution::parallel); });
  std::printf("%-10s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  SynthConfig config;
  config.stocks = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 100;
  config.days = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 22;
  if (argc > 3) set_thread_count(std::atoi(argv[3]));
  config.ticks_per_minute = 6.0;
  config.beta = 0.5;
  config.seed = 7;

  SessionSpec spec;
  spec.bin_seconds = 60;
  const SynthData data = generate(config);
  std::printf("%zu stocks x %zu days, %zu ticks, %zu bins\n", config.stocks, config.days, data.store.tick_count(),
              spec.bin_count());

  report("binning", [&](Execution exec) { (void)build_panel(data.store, spec, {}, exec); });
  const PricePanel panel = build_panel(data.store, spec);
  const ObservablePanel returns = compute_returns(panel);
  report("moments", [&](Execution exec) {
    (void)single_stock_moments(returns, KurtosisMode::with_skew_term, exec);
    (void)cross_section_moments(returns, KurtosisMode::with_skew_term, exec);
  });
  const ObservablePanel normalized = normalize_returns(returns, cross_section_moments(returns));
  const auto subsets = draw_subsets(config.stocks, std::vector<SubsetRequest>{{"all", config.stocks, SubsetMode::first}}, 0);
  report("spectrum", [&](Execution exec) { (void)spectrum_curves(normalized, subsets, 5, exec); });
  return 0;
}
