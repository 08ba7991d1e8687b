// intraday: command-line front end for the seasonality pipeline.
//
//   intraday synth    --seed S --out DIR            synthetic ticks + ground truth
//   intraday bins     --ticks F --out DIR           bin-price panel
//   intraday moments  --ticks F --observable KIND   seasonal moment curves
//   intraday spectrum --ticks F --subsets SPEC      per-bin correlation spectra
//   intraday sweep    --ticks F --T-grid LIST       bin-size sweep and overlap scores
//   intraday anomaly  --ticks F --entity days       atypical day / stock scores
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "intraday/anomaly.hpp"
#include "intraday/binning.hpp"
#include "intraday/error.hpp"
#include "intraday/moments.hpp"
#include "intraday/observables.hpp"
#include "intraday/spectrum.hpp"
#include "intraday/sweep.hpp"
#include "intraday/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace intraday;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CommonArgs {
  std::string ticks;
  std::string out = ".";
  std::string open = "10:00";
  std::string close = "16:00";
  std::string dates;
  int bin_seconds = 60;
  int pre_open_margin = 0;
  std::string policy = "exclude";
  std::uint64_t seed = 0;
  int threads = 0;
};

void add_session_flags(CLI::App& cmd, CommonArgs& args, bool with_bins = true) {
  cmd.add_option("--ticks", args.ticks, "Tick CSV (symbol,timestamp,price)")->required();
  cmd.add_option("--out", args.out, "Output directory")->capture_default_str();
  cmd.add_option("--open", args.open, "Session open, HH:MM[:SS]")->capture_default_str();
  cmd.add_option("--close", args.close, "Session close, HH:MM[:SS]")->capture_default_str();
  cmd.add_option("--dates", args.dates, "Comma-separated session dates YYYY-MM-DD (default: dates in the data)");
  if (with_bins) cmd.add_option("--bin-seconds", args.bin_seconds, "Bin size T in seconds")->capture_default_str();
  cmd.add_option("--pre-open-margin", args.pre_open_margin, "Seconds before the open still accepted")
      ->capture_default_str();
  cmd.add_option("--policy", args.policy, "Stock-days without a first-bin price: exclude|error")
      ->check(CLI::IsMember({"exclude", "error"}))
      ->capture_default_str();
  cmd.add_option("--seed", args.seed, "Random seed")->capture_default_str();
  cmd.add_option("--threads", args.threads, "OpenMP threads (0 = runtime default)")->capture_default_str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Millis parse_clock(const std::string& text, const char* flag) {
  auto t = parse_time_of_day(text);
  if (!t) throw UsageError(std::string(flag) + ": bad time `" + text + "`");
  return *t;
}

SessionSpec session_from(const CommonArgs& args) {
  SessionSpec spec;
  spec.open = parse_clock(args.open, "--open");
  spec.close = parse_clock(args.close, "--close");
  spec.bin_seconds = args.bin_seconds;
  spec.pre_open_margin = static_cast<Millis>(args.pre_open_margin) * kMillisPerSecond;
  for (const auto& d : split_list(args.dates)) {
    auto date = parse_date(d);
    if (!date) throw UsageError("--dates: bad date `" + d + "`");
    spec.dates.push_back(*date);
  }
  std::sort(spec.dates.begin(), spec.dates.end());
  return spec;
}

ExclusionPolicy policy_from(const CommonArgs& args) {
  return args.policy == "error" ? ExclusionPolicy::error : ExclusionPolicy::exclude;
}

TickStore load_ticks(const CommonArgs& args, const SessionSpec& spec) {
  std::ifstream in(args.ticks, std::ios::binary);
  if (!in) throw DataError("cannot open tick file " + args.ticks);
  TickStore store = parse_ticks(in, spec);
  if (store.dropped_out_of_session() > 0) {
    std::cerr << "warning: dropped " << store.dropped_out_of_session() << " out-of-session ticks\n";
  }
  return store;
}

fs::path prepare_out(const CommonArgs& args) {
  fs::path dir(args.out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
}

template <class Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ostringstream ss;
  fn(ss);
  write_file(path, ss.str());
}

json session_json(const SessionSpec& spec) {
  json j;
  j["open"] = format_time_of_day(spec.open);
  j["close"] = format_time_of_day(spec.close);
  j["bin_seconds"] = spec.bin_seconds;
  j["pre_open_margin_seconds"] = spec.pre_open_margin / kMillisPerSecond;
  auto dates = json::array();
  for (const Date d : spec.dates) dates.push_back(format_date(d));
  j["dates"] = dates;
  return j;
}

json base_manifest(const std::string& command, const CommonArgs& args, const SessionSpec& spec,
                   const TickStore& store) {
  json m;
  m["command"] = command;
  m["tool_version"] = kVersion;
  m["inputs"] = {{"ticks", args.ticks}};
  m["session"] = session_json(spec);
  m["seed"] = args.seed;
  m["universe_size"] = store.stock_count();
  m["days"] = store.day_count();
  m["counters"] = {{"ticks", store.tick_count()}, {"dropped_out_of_session", store.dropped_out_of_session()}};
  return m;
}

void write_manifest(const fs::path& dir, json manifest, const std::vector<std::string>& outputs) {
  manifest["outputs"] = outputs;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

ObservableKind observable_from(const std::string& name) {
  if (name == "returns") return ObservableKind::returns;
  if (name == "relative" || name == "relative_prices") return ObservableKind::relative_prices;
  throw UsageError("observable must be `returns` or `relative`, got `" + name + "`");
}

std::vector<Statistic> statistics_from(const std::string& text) {
  std::vector<Statistic> out;
  for (const auto& name : split_list(text)) {
    auto s = parse_statistic(name);
    if (!s || *s == Statistic::median || *s == Statistic::abs_mean) {
      throw UsageError("--stats accepts mean, volatility, skewness, kurtosis; got `" + name + "`");
    }
    out.push_back(*s);
  }
  if (out.empty()) throw UsageError("--stats is empty");
  return out;
}

// ---------------------------------------------------------------- bins

void run_bins(const CommonArgs& args) {
  const SessionSpec spec = session_from(args);
  spec.validate();
  const TickStore store = load_ticks(args, spec);
  const PricePanel panel = build_panel(store, spec, BinningOptions{policy_from(args), std::nullopt});
  const fs::path dir = prepare_out(args);
  write_with(dir / "panel.csv", [&](std::ostream& o) { write_panel_csv(o, panel); });
  json m = base_manifest("bins", args, spec, store);
  m["counters"]["excluded_stock_days"] = panel.excluded_count();
  m["counters"]["included_stock_days"] = panel.included_count();
  m["policy"] = args.policy;
  write_manifest(dir, m, {"panel.csv"});
}

// ---------------------------------------------------------------- moments

struct MomentsArgs {
  std::string observable = "returns";
  bool per_stock = false;
  bool per_day = false;
  bool literal_kurtosis = false;
};

void run_moments(const CommonArgs& args, const MomentsArgs& margs) {
  const SessionSpec spec = session_from(args);
  spec.validate();
  const ObservableKind kind = observable_from(margs.observable);
  const KurtosisMode mode = margs.literal_kurtosis ? KurtosisMode::literal : KurtosisMode::with_skew_term;
  const TickStore store = load_ticks(args, spec);
  const PricePanel panel = build_panel(store, spec, BinningOptions{policy_from(args), std::nullopt});
  const ObservablePanel obs =
      kind == ObservableKind::returns ? compute_returns(panel) : compute_relative_prices(panel);
  const auto single = single_stock_moments(obs, mode);
  // Cross-sectional kurtosis is the only statistic affected by the literal mode.
  const auto cross = cross_section_moments(obs, mode);

  std::vector<SeasonalCurve> curves = stock_average(single);
  for (auto& c : time_average(cross)) curves.push_back(std::move(c));

  const fs::path dir = prepare_out(args);
  std::vector<std::string> outputs{"curves.csv"};
  write_with(dir / "curves.csv", [&](std::ostream& o) { write_curves_csv(o, curves); });
  if (margs.per_stock) {
    write_with(dir / "per_stock.csv", [&](std::ostream& o) { write_single_stock_csv(o, single); });
    outputs.push_back("per_stock.csv");
  }
  if (margs.per_day) {
    write_with(dir / "per_day.csv", [&](std::ostream& o) { write_cross_section_csv(o, cross); });
    outputs.push_back("per_day.csv");
  }
  json m = base_manifest("moments", args, spec, store);
  m["observable"] = std::string(to_string(kind));
  m["kurtosis_mode"] = margs.literal_kurtosis ? "literal" : "with_skew_term";
  m["counters"]["excluded_stock_days"] = panel.excluded_count();
  write_manifest(dir, m, outputs);
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string subsets;
  std::size_t top = 5;
};

void run_spectrum(const CommonArgs& args, const SpectrumArgs& sargs) {
  const SessionSpec spec = session_from(args);
  spec.validate();
  const TickStore store = load_ticks(args, spec);
  std::vector<SubsetRequest> requests =
      sargs.subsets.empty() ? std::vector<SubsetRequest>{{"all", store.stock_count(), SubsetMode::first}}
                            : parse_subset_requests(sargs.subsets);
  const auto subsets = draw_subsets(store.stock_count(), requests, args.seed);
  if (sargs.top == 0) throw UsageError("--top must be at least 1");

  const PricePanel panel = build_panel(store, spec, BinningOptions{policy_from(args), std::nullopt});
  const ObservablePanel returns = compute_returns(panel);
  const auto cross = cross_section_moments(returns);
  const ObservablePanel normalized = normalize_returns(returns, cross);
  const auto curves = spectrum_curves(normalized, subsets, sargs.top);

  const fs::path dir = prepare_out(args);
  write_with(dir / "spectrum.csv", [&](std::ostream& o) { write_spectrum_csv(o, curves); });
  write_with(dir / "correlation_summary.csv", [&](std::ostream& o) { write_correlation_summary_csv(o, curves); });

  json m = base_manifest("spectrum", args, spec, store);
  m["observable"] = "normalized_returns";
  m["top"] = sargs.top;
  auto subset_json = json::array();
  std::size_t gaps = 0;
  for (const auto& c : curves) {
    std::size_t subset_gaps = 0;
    for (const auto& b : c.bins) subset_gaps += b ? 0 : 1;
    gaps += subset_gaps;
    subset_json.push_back({{"label", c.subset.label},
                           {"mode", c.subset.mode == SubsetMode::first ? "first" : "random"},
                           {"size", c.subset.size()},
                           {"stream_seed", c.subset.seed},
                           {"failed_bins", subset_gaps}});
  }
  m["subsets"] = subset_json;
  m["counters"]["excluded_stock_days"] = panel.excluded_count();
  m["counters"]["failed_bins"] = gaps;
  write_manifest(dir, m, {"spectrum.csv", "correlation_summary.csv"});
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string grid = "30,60,120,300,600";
  std::string observables = "returns,relative";
  int anchor = 0;
  bool literal_kurtosis = false;
};

void run_sweep_cmd(const CommonArgs& args, const SweepArgs& wargs) {
  const SessionSpec spec = session_from(args);
  std::vector<int> grid;
  for (const auto& item : split_list(wargs.grid)) {
    try {
      grid.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("--T-grid: bad value `" + item + "`");
    }
  }
  std::vector<ObservableKind> kinds;
  for (const auto& name : split_list(wargs.observables)) kinds.push_back(observable_from(name));
  if (kinds.empty()) throw UsageError("--observables is empty");
  // Validate every bin size before touching the data.
  if (grid.empty()) throw UsageError("--T-grid is empty");
  for (const int t : grid) {
    SessionSpec s = spec;
    s.bin_seconds = t;
    s.validate();
  }

  const TickStore store = load_ticks(args, spec);
  PipelineOptions options;
  options.policy = policy_from(args);
  options.kurtosis = wargs.literal_kurtosis ? KurtosisMode::literal : KurtosisMode::with_skew_term;
  if (wargs.anchor > 0) options.relative_anchor_seconds = wargs.anchor;
  const SweepResult sweep = run_sweep(store, spec, grid, kinds, options);

  std::vector<OverlapScore> overlaps;
  for (const auto kind : kinds) {
    for (std::size_t i = 1; i < sweep.runs.size(); ++i) {
      for (const auto stat : {Statistic::volatility, Statistic::abs_mean}) {
        try {
          overlaps.push_back(
              overlap_score(sweep, kind, stat, sweep.runs.front().bin_seconds, sweep.runs[i].bin_seconds));
        } catch (const DataError& e) {
          std::cerr << "warning: " << e.what() << "\n";
        }
      }
    }
  }
  const auto kurt = kurtosis_vs_binsize(sweep);

  const fs::path dir = prepare_out(args);
  std::vector<std::string> outputs{"sweep.csv", "overlap.csv"};
  write_with(dir / "sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, sweep); });
  write_with(dir / "overlap.csv", [&](std::ostream& o) { write_overlap_csv(o, overlaps); });
  if (std::find(kinds.begin(), kinds.end(), ObservableKind::returns) != kinds.end()) {
    write_with(dir / "kurtosis_vs_binsize.csv", [&](std::ostream& o) { write_kurtosis_summary_csv(o, kurt); });
    outputs.push_back("kurtosis_vs_binsize.csv");
  }

  json m = base_manifest("sweep", args, spec, store);
  m["session"].erase("bin_seconds");
  m["T_grid_seconds"] = grid;
  auto kind_names = json::array();
  for (const auto k : kinds) kind_names.push_back(std::string(to_string(k)));
  m["observables"] = kind_names;
  m["relative_anchor_seconds"] = sweep.relative_anchor_seconds;
  m["kurtosis_mode"] = wargs.literal_kurtosis ? "literal" : "with_skew_term";
  json excluded;
  for (const auto& r : sweep.runs) excluded[std::to_string(r.bin_seconds)] = r.excluded_stock_days;
  m["counters"]["excluded_stock_days_by_T"] = excluded;
  write_manifest(dir, m, outputs);
}

// ---------------------------------------------------------------- anomaly

struct AnomalyArgs {
  std::string entity = "days";
  std::string stats = "mean,volatility";
  std::string observable = "relative";
};

void run_anomaly(const CommonArgs& args, const AnomalyArgs& aargs) {
  const SessionSpec spec = session_from(args);
  spec.validate();
  const auto stats = statistics_from(aargs.stats);
  const ObservableKind kind = observable_from(aargs.observable);
  const TickStore store = load_ticks(args, spec);
  const PricePanel panel = build_panel(store, spec, BinningOptions{policy_from(args), std::nullopt});
  const ObservablePanel obs =
      kind == ObservableKind::returns ? compute_returns(panel) : compute_relative_prices(panel);

  const AnomalyReport report = aargs.entity == "days" ? day_scores(cross_section_moments(obs), stats)
                                                      : stock_scores(single_stock_moments(obs), stats);

  const fs::path dir = prepare_out(args);
  write_with(dir / "anomaly.csv", [&](std::ostream& o) { write_anomaly_csv(o, report); });

  json summary;
  summary["entity_kind"] = std::string(to_string(report.kind));
  summary["observable"] = std::string(to_string(kind));
  auto stat_names = json::array();
  for (const auto s : report.statistics) stat_names.push_back(std::string(to_string(s)));
  summary["statistics"] = stat_names;
  summary["top_entity"] = report.entity_ids[report.top()];
  json skipped = json::object();
  for (std::size_t s = 0; s < report.statistics.size(); ++s) {
    std::size_t total = 0;
    for (const auto& e : report.scores) total += e.skipped_bins[s];
    skipped[std::string(to_string(report.statistics[s]))] = total;
  }
  summary["skipped_bins"] = skipped;
  json per_entity = json::object();
  for (const auto& e : report.scores) {
    json row = json::object();
    for (std::size_t s = 0; s < report.statistics.size(); ++s) {
      row[std::string(to_string(report.statistics[s]))] = e.skipped_bins[s];
    }
    per_entity[report.entity_ids[e.entity]] = row;
  }
  summary["skipped_bins_by_entity"] = per_entity;
  write_file(dir / "anomaly_summary.json", summary.dump(2) + "\n");

  json m = base_manifest("anomaly", args, spec, store);
  m["observable"] = std::string(to_string(kind));
  m["entity"] = aargs.entity;
  m["statistics"] = stat_names;
  m["counters"]["excluded_stock_days"] = panel.excluded_count();
  write_manifest(dir, m, {"anomaly.csv", "anomaly_summary.json"});
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string out = ".";
  std::size_t stocks = 100;
  std::size_t days = 22;
  std::string open = "10:00";
  std::string close = "16:00";
  std::string start_date = "2011-03-01";
  double rate = 6.0;
  double volatility = 1e-3;
  std::string profile = "flat";
  std::string law = "gaussian";
  double nu = 3.0;
  double beta = 0.0;
  double drift = 0.0;
  std::vector<std::string> crash_days;
  std::vector<std::string> rogue_stocks;
  std::uint64_t seed = 0;
  int threads = 0;
};

AnomalyInjection parse_injection(const std::string& text, AnomalyKind kind, const char* flag) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("missing colon");
    std::size_t used = 0;
    const auto target = std::stoul(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("bad index");
    const double magnitude = std::stod(text.substr(colon + 1));
    return AnomalyInjection{kind, target, magnitude};
  } catch (const std::exception&) {
    throw UsageError(std::string(flag) + " expects INDEX:MAGNITUDE, got `" + text + "`");
  }
}

void run_synth(const SynthArgs& sargs) {
  SynthConfig config;
  config.stocks = sargs.stocks;
  config.days = sargs.days;
  config.open = parse_clock(sargs.open, "--open");
  config.close = parse_clock(sargs.close, "--close");
  auto start = parse_date(sargs.start_date);
  if (!start) throw UsageError("--start-date: bad date `" + sargs.start_date + "`");
  config.first_date = *start;
  config.ticks_per_minute = sargs.rate;
  config.volatility = sargs.volatility;
  config.profile = sargs.profile == "u" ? VolatilityProfile::u_shaped() : VolatilityProfile::flat();
  config.law = sargs.law == "student-t" ? InnovationLaw::student_t : InnovationLaw::gaussian;
  config.nu = sargs.nu;
  config.beta = sargs.beta;
  config.drift = sargs.drift;
  for (const auto& c : sargs.crash_days) config.injections.push_back(parse_injection(c, AnomalyKind::crash_day, "--crash-day"));
  for (const auto& r : sargs.rogue_stocks) {
    config.injections.push_back(parse_injection(r, AnomalyKind::rogue_stock, "--rogue-stock"));
  }
  config.seed = sargs.seed;
  config.validate();

  const SynthData data = generate(config);
  fs::path dir(sargs.out);
  fs::create_directories(dir);
  write_with(dir / "ticks.csv", [&](std::ostream& o) { write_synth_ticks_csv(o, data.store); });
  write_with(dir / "ground_truth.json", [&](std::ostream& o) { write_ground_truth_json(o, config, data.truth); });

  json m;
  m["command"] = "synth";
  m["tool_version"] = kVersion;
  m["seed"] = config.seed;
  m["inputs"] = json::object();
  m["session"] = {{"open", format_time_of_day(config.open)}, {"close", format_time_of_day(config.close)}};
  m["counters"] = {{"ticks", data.store.tick_count()}};
  write_manifest(dir, m, {"ticks.csv", "ground_truth.json"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intraday seasonality analysis of tick data"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs bins_args;
  auto* bins = app.add_subcommand("bins", "Build the bin-price panel");
  add_session_flags(*bins, bins_args);

  CommonArgs mom_args;
  MomentsArgs mom_extra;
  auto* moments = app.add_subcommand("moments", "Seasonal moment curves of returns or relative prices");
  add_session_flags(*moments, mom_args);
  moments->add_option("--observable", mom_extra.observable, "returns|relative")
      ->check(CLI::IsMember({"returns", "relative"}))
      ->capture_default_str();
  moments->add_flag("--per-stock", mom_extra.per_stock, "Also write un-averaged single-stock paths");
  moments->add_flag("--per-day", mom_extra.per_day, "Also write un-averaged cross-sectional paths");
  moments->add_flag("--literal-kurtosis", mom_extra.literal_kurtosis,
                    "Cross-sectional kurtosis without the skewness-squared term");

  CommonArgs spec_args;
  SpectrumArgs spec_extra;
  auto* spectrum = app.add_subcommand("spectrum", "Per-bin correlation eigenvalue spectra");
  add_session_flags(*spectrum, spec_args);
  spectrum->add_option("--subsets", spec_extra.subsets,
                       "label:first|rand:size,... (default: whole universe as `all`)");
  spectrum->add_option("--top", spec_extra.top, "Number of leading eigenvalues to report")->capture_default_str();

  CommonArgs sweep_args;
  SweepArgs sweep_extra;
  auto* sweep = app.add_subcommand("sweep", "Bin-size sweep and curve overlap scores");
  add_session_flags(*sweep, sweep_args, false);
  sweep->add_option("--T-grid", sweep_extra.grid, "Comma-separated bin sizes in seconds")->capture_default_str();
  sweep->add_option("--observables", sweep_extra.observables, "Comma-separated: returns,relative")
      ->capture_default_str();
  sweep->add_option("--relative-anchor", sweep_extra.anchor,
                    "Seconds after the open for the relative-price base (0 = smallest T)")
      ->capture_default_str();
  sweep->add_flag("--literal-kurtosis", sweep_extra.literal_kurtosis,
                  "Cross-sectional kurtosis without the skewness-squared term");

  CommonArgs anom_args;
  AnomalyArgs anom_extra;
  auto* anomaly = app.add_subcommand("anomaly", "Score atypical days or anomalous stocks");
  add_session_flags(*anomaly, anom_args);
  anomaly->add_option("--entity", anom_extra.entity, "days|stocks")
      ->check(CLI::IsMember({"days", "stocks"}))
      ->capture_default_str();
  anomaly->add_option("--stats", anom_extra.stats, "Comma-separated statistics")->capture_default_str();
  anomaly->add_option("--observable", anom_extra.observable, "returns|relative")
      ->check(CLI::IsMember({"returns", "relative"}))
      ->capture_default_str();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate synthetic tick data");
  synth->add_option("--out", synth_args.out, "Output directory")->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "Random seed")->required();
  synth->add_option("--stocks", synth_args.stocks, "Number of stocks N")->capture_default_str();
  synth->add_option("--days", synth_args.days, "Number of trading days D")->capture_default_str();
  synth->add_option("--open", synth_args.open, "Session open")->capture_default_str();
  synth->add_option("--close", synth_args.close, "Session close")->capture_default_str();
  synth->add_option("--start-date", synth_args.start_date, "First trading date")->capture_default_str();
  synth->add_option("--rate", synth_args.rate, "Poisson tick rate per minute")->capture_default_str();
  synth->add_option("--volatility", synth_args.volatility, "Log-price volatility per sqrt(minute)")
      ->capture_default_str();
  synth->add_option("--profile", synth_args.profile, "flat|u")
      ->check(CLI::IsMember({"flat", "u"}))
      ->capture_default_str();
  synth->add_option("--law", synth_args.law, "gaussian|student-t")
      ->check(CLI::IsMember({"gaussian", "student-t"}))
      ->capture_default_str();
  synth->add_option("--nu", synth_args.nu, "Student-t degrees of freedom")->capture_default_str();
  synth->add_option("--beta", synth_args.beta, "Common-factor loading in [0, 1)")->capture_default_str();
  synth->add_option("--drift", synth_args.drift, "Log-price drift per session")->capture_default_str();
  synth->add_option("--crash-day", synth_args.crash_days, "DAY:MAGNITUDE negative drift ramp (repeatable)");
  synth->add_option("--rogue-stock", synth_args.rogue_stocks, "STOCK:MULTIPLIER volatility boost (repeatable)");
  synth->add_option("--threads", synth_args.threads, "OpenMP threads (0 = runtime default)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bins) {
      set_thread_count(bins_args.threads);
      run_bins(bins_args);
    } else if (*moments) {
      set_thread_count(mom_args.threads);
      run_moments(mom_args, mom_extra);
    } else if (*spectrum) {
      set_thread_count(spec_args.threads);
      run_spectrum(spec_args, spec_extra);
    } else if (*sweep) {
      set_thread_count(sweep_args.threads);
      run_sweep_cmd(sweep_args, sweep_extra);
    } else if (*anomaly) {
      set_thread_count(anom_args.threads);
      run_anomaly(anom_args, anom_extra);
    } else if (*synth) {
      set_thread_count(synth_args.threads);
      run_synth(synth_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::usage: return 2;
      case ErrorKind::data: return 3;
      case ErrorKind::numeric: return 4;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
