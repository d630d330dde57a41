// coincsim command-line front end.
//
// Exit codes: 0 success, 2 configuration / usage error, 3 input-data error,
// 1 anything else.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "coincsim/config.hpp"
#include "coincsim/electronics.hpp"
#include "coincsim/error.hpp"
#include "coincsim/results_csv.hpp"
#include "coincsim/scenario.hpp"
#include "coincsim/statistics.hpp"
#include "coincsim/timetag_io.hpp"

namespace {

using namespace coincsim;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
}

struct SimulateArgs {
  std::string config;
  std::string out{"-"};
  std::optional<std::uint64_t> seed;
  unsigned jobs{1};
};

int simulate(const SimulateArgs& a) {
  ScenarioConfig cfg = load_config_file(a.config);
  if (a.seed) cfg.seed.master_seed = *a.seed;
  const ScenarioResult r = run_scenario(cfg, {a.jobs});
  write_text(a.out, emit_results_csv(r));
  if (r.overall) {
    std::fprintf(stderr, "%s: alpha = %.6g +- %.6g (%.1f sigma from 1) over %zu point(s)\n", r.name.c_str(),
                 r.overall->alpha, r.overall->sigma, r.separation_from_one.value_or(0.0), r.overall_points);
  }
  return kExitOk;
}

int oracle(const std::string& config) {
  const ScenarioConfig cfg = load_config_file(config);
  const auto expected = scenario_oracle(cfg);
  std::printf("point,multiplier,expected_alpha\n");
  for (std::size_t i = 0; i < expected.size(); ++i) {
    std::printf("%zu,%.6g,%.6g\n", i, cfg.sweep[i], expected[i]);
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string input;
  std::string format{"ttag1"};
  double window_ns{7.0};
  std::string gate_channel{"T"};
  std::string policy{"drop_overlapping"};
  std::string out{"-"};
  std::string histogram_out;
  double hist_lo_ns{-20.0};
  double hist_hi_ns{80.0};
  double hist_bin_ns{0.5};
};

int analyze(const AnalyzeArgs& a) {
  const auto format = timetag_format_from_string(a.format);
  if (!format) throw ConfigError("unknown format '" + a.format + "'", "--format");
  const auto gate_ch = channel_from_string(a.gate_channel);
  if (!gate_ch || (*gate_ch != Channel::Trigger && *gate_ch != Channel::GateGen)) {
    throw ConfigError("gate channel must be T or G", "--gate-channel");
  }
  if (!(a.window_ns > 0.0)) throw ConfigError("window must be positive", "--window-ns");
  GatePolicy policy;
  if (a.policy == "allow_overlap") {
    policy.overlap = OverlapPolicy::AllowOverlap;
  } else if (a.policy != "drop_overlapping") {
    throw ConfigError("policy must be drop_overlapping or allow_overlap", "--policy");
  }

  const std::vector<std::uint8_t> bytes = read_file_bytes(a.input);
  const EventStream s = parse_timetag(bytes, *format);
  const EventStream starts = filter_channel(s, *gate_ch);
  const EventStream d1 = filter_channel(s, Channel::D1);
  const EventStream d2 = filter_channel(s, Channel::D2);
  const auto window_ps = static_cast<TimePs>(std::llround(a.window_ns * 1000.0));
  const GateList gates = make_gates_from_trigger(starts, window_ps, policy);

  PointResult p;
  p.acquisitions = 1;
  p.tally.counts = count_gates(gates, d1, d2);
  p.tally.trigger_clicks = starts.size();
  p.tally.d1_clicks = d1.size();
  p.tally.d2_clicks = d2.size();
  p.tally.observed_ps = s.duration_ps;
  const double seconds = static_cast<double>(s.duration_ps) / 1e12;
  p.trigger_rate_cps = seconds > 0.0 ? static_cast<double>(starts.size()) / seconds : 0.0;
  p.d1_rate_cps = seconds > 0.0 ? static_cast<double>(d1.size()) / seconds : 0.0;
  p.d2_rate_cps = seconds > 0.0 ? static_cast<double>(d2.size()) / seconds : 0.0;
  p.rate_cps = *gate_ch == Channel::Trigger ? p.trigger_rate_cps : p.d1_rate_cps;
  const auto& c = p.tally.counts;
  if (c.N > 0 && c.N1 > 0 && c.N2 > 0) p.estimate = alpha_estimate(c);

  ScenarioResult r;
  r.name = a.input;
  r.points.push_back(p);
  r.overall_points = 1;
  if (p.estimate) {
    r.overall = p.estimate;
    r.separation_from_one = sigma_separation(*p.estimate, 1.0);
  }
  write_text(a.out, emit_results_csv(r));

  if (!a.histogram_out.empty()) {
    const auto ns = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1000.0)); };
    std::string text = "channel,bin_lo_ps,count\n";
    for (const auto* stops : {&d1, &d2}) {
      const Histogram h = time_difference_histogram(starts, *stops, ns(a.hist_lo_ns), ns(a.hist_hi_ns), ns(a.hist_bin_ns));
      const char* name = stops == &d1 ? "D1" : "D2";
      for (std::size_t i = 0; i < h.counts.size(); ++i) {
        text += std::string(name) + "," + std::to_string(h.lo_ps + static_cast<std::int64_t>(i) * h.bin_width_ps) +
                "," + std::to_string(h.counts[i]) + "\n";
      }
    }
    write_text(a.histogram_out, text);
  }
  return kExitOk;
}

struct ExportArgs {
  std::string config;
  std::string out;
  std::string format{"ttag1"};
  std::size_t point{0};
  std::uint64_t acquisition{0};
};

int export_stream(const ExportArgs& a) {
  const auto format = timetag_format_from_string(a.format);
  if (!format) throw ConfigError("unknown format '" + a.format + "'", "--format");
  const ScenarioConfig cfg = load_config_file(a.config);
  validate(cfg);
  if (a.point >= cfg.sweep.size()) throw ConfigError("point index beyond the sweep", "--point");
  const EventStream s = acquisition_streams(cfg, a.point, a.acquisition).merged();
  write_file_bytes(a.out, write_timetag(s, *format));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gated photon-coincidence simulator and analyzer"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a scenario and write the results CSV");
  sim_cmd->add_option("--config", sim.config, "Scenario file")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--out", sim.out, "Results CSV ('-' for stdout)");
  sim_cmd->add_option("--seed", sim.seed, "Override the master seed");
  sim_cmd->add_option("--jobs", sim.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));

  std::string oracle_config;
  auto* oracle_cmd = app.add_subcommand("oracle", "Print the analytic expected alpha per sweep point");
  oracle_cmd->add_option("--config", oracle_config, "Scenario file")->required()->check(CLI::ExistingFile);

  AnalyzeArgs an;
  auto* an_cmd = app.add_subcommand("analyze", "Count gates in a recorded time-tag stream");
  an_cmd->add_option("--input", an.input, "Time-tag file")->required()->check(CLI::ExistingFile);
  an_cmd->add_option("--format", an.format, "csv or ttag1")->check(CLI::IsMember({"csv", "ttag1"}));
  an_cmd->add_option("--window-ns", an.window_ns, "Gate width in ns");
  an_cmd->add_option("--gate-channel", an.gate_channel, "Channel opening gates: T or G")
      ->check(CLI::IsMember({"T", "G"}));
  an_cmd->add_option("--policy", an.policy, "drop_overlapping or allow_overlap");
  an_cmd->add_option("--out", an.out, "Results CSV ('-' for stdout)");
  an_cmd->add_option("--histogram", an.histogram_out, "Also write start-stop delay histograms to this CSV");
  an_cmd->add_option("--hist-lo-ns", an.hist_lo_ns, "Histogram lower edge");
  an_cmd->add_option("--hist-hi-ns", an.hist_hi_ns, "Histogram upper edge");
  an_cmd->add_option("--hist-bin-ns", an.hist_bin_ns, "Histogram bin width");

  ExportArgs ex;
  auto* ex_cmd = app.add_subcommand("export", "Write the click streams of one simulated acquisition");
  ex_cmd->add_option("--config", ex.config, "Scenario file")->required()->check(CLI::ExistingFile);
  ex_cmd->add_option("--out", ex.out, "Output time-tag file")->required();
  ex_cmd->add_option("--format", ex.format, "csv or ttag1")->check(CLI::IsMember({"csv", "ttag1"}));
  ex_cmd->add_option("--point", ex.point, "Sweep point index");
  ex_cmd->add_option("--acquisition", ex.acquisition, "Acquisition index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim_cmd) return simulate(sim);
    if (*oracle_cmd) return oracle(oracle_config);
    if (*an_cmd) return analyze(an);
    if (*ex_cmd) return export_stream(ex);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
