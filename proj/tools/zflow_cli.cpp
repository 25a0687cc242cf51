// zflow command-line front end.
//
//   zflow analyze   --config run.conf
//   zflow simulate  --config run.conf [--out dir]
//   zflow reproduce [--out dir] [--fig 3|4] [--band 0.01] [--mode analytic|physical]
//   zflow sweep     --config run.conf [--out dir] [--a-values ...] [--b-values ...]
//
// Exit status: 0 success, 1 configuration or parameter error, 2 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zflow/zflow.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw zflow::Error(zflow::ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

zflow::RunConfig load_config(const std::string& path) {
  auto cfg = zflow::parse_config(read_file(path));
  for (const auto& d : cfg.defaults_applied) std::cerr << "default: " << d << '\n';
  return cfg;
}

std::string settling_text(const std::optional<std::size_t>& k) { return k ? std::to_string(*k) : "none"; }

void print_design(const zflow::Scenario& s, double band) {
  const auto& p = s.params;
  const auto d = zflow::design_gain(p);
  const auto response = zflow::predicted_queue(p, s.horizon, band);
  std::cout << "a = " << p.a << ", b = " << p.b << ", Q = " << p.Q << ", M = " << p.M << ", rho = " << p.rho << '\n'
            << "gain c            = " << zflow::format_double(d.c) << '\n'
            << "residues a1, a2   = " << zflow::format_double(d.residues.a1) << ", "
            << zflow::format_double(d.residues.a2) << '\n'
            << "poles             = " << zflow::format_double(d.poles.first) << ", "
            << zflow::format_double(d.poles.second) << '\n'
            << "steady state      = " << zflow::format_double(d.steady_state_queue) << " packets\n"
            << "final value G*S   = " << zflow::format_double(response.steady_state) << " packets\n"
            << "settling epoch    = " << settling_text(response.settling_epoch) << " (band " << band << ", horizon "
            << s.horizon << ")\n";
}

int cmd_analyze(const std::string& config, std::optional<double> band) {
  const auto cfg = load_config(config);
  print_design(cfg.scenario, band.value_or(cfg.band));
  return 0;
}

int cmd_simulate(const std::string& config, std::optional<std::string> out) {
  const auto cfg = load_config(config);
  const auto trace = zflow::run_scenario(cfg.scenario);
  const std::filesystem::path dir = out ? std::filesystem::path(*out) : cfg.out_dir;
  for (const auto& f : zflow::emit_trace(trace, dir, "trace", cfg.emit_chart)) std::cout << f.string() << '\n';
  const auto& last = trace.records.back();
  std::cout << "k=" << last.k << " q_time=" << zflow::format_double(last.q_time())
            << " q_zpred=" << zflow::format_double(last.q_zpred()) << " drops=" << zflow::format_double(last.drops())
            << '\n';
  return 0;
}

int cmd_reproduce(const std::string& out, std::optional<int> fig, double band, const std::string& mode_name,
                  bool chart) {
  if (mode_name != "analytic" && mode_name != "physical")
    throw zflow::Error(zflow::ErrorCode::InvalidParams, "mode must be analytic or physical");
  const auto mode = mode_name == "physical" ? zflow::Mode::physical : zflow::Mode::analytic;
  const auto runs = zflow::run_reference_suite(fig, mode);
  std::printf("%-4s %-5s %7s %6s %9s %12s %12s %9s\n", "fig", "line", "ub", "M", "c", "q_time(K)", "q_zpred(K)",
              "settling");
  for (const auto& run : runs) {
    const auto& t = run.trace;
    const std::string stem = "fig" + std::to_string(run.figure) + "_line" + std::to_string(run.line);
    zflow::emit_trace(t, out, stem, chart);
    const auto response = zflow::predicted_queue(t.scenario.params, t.scenario.horizon, band);
    std::printf("%-4d %-5d %7.2f %6.2f %9.4f %12.6f %12.6f %9s\n", run.figure, run.line,
                t.scenario.ub_schedule.front().rate, t.scenario.params.M, t.design.c, t.records.back().q_time(),
                t.records.back().q_zpred(), settling_text(response.settling_epoch).c_str());
  }
  std::cout << "wrote " << runs.size() << " traces to " << out << '\n';
  return 0;
}

int cmd_sweep(const std::string& config, std::optional<std::string> out, const std::vector<double>& a_values,
              const std::vector<double>& b_values, std::optional<double> band) {
  const auto cfg = load_config(config);
  const auto grid = zflow::sweep(a_values, b_values, cfg.scenario, band.value_or(cfg.band));
  const std::filesystem::path dir = out ? std::filesystem::path(*out) : cfg.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw zflow::Error(zflow::ErrorCode::Io, "cannot create " + dir.string());
  const auto path = dir / "sweep.csv";
  std::ofstream f(path);
  if (!f) throw zflow::Error(zflow::ErrorCode::Io, "cannot open " + path.string());
  zflow::write_sweep_csv(f, grid);
  if (!f) throw zflow::Error(zflow::ErrorCode::Io, "write failed for " + path.string());
  zflow::write_sweep_csv(std::cout, grid);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-control flow-control designer and simulator"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out;
  std::optional<double> band;

  auto* analyze = app.add_subcommand("analyze", "Print gain design, poles, steady state and settling epoch");
  analyze->add_option("--config", config, "Configuration file")->required();
  analyze->add_option("--band", band, "Settling band as a fraction of steady state");

  auto* simulate = app.add_subcommand("simulate", "Run a configured scenario and write trace files");
  simulate->add_option("--config", config, "Configuration file")->required();
  simulate->add_option("--out", out, "Output directory (overrides out_dir)");

  std::string repro_out = "reproduce";
  std::optional<int> fig;
  double repro_band = zflow::kDefaultSettlingBand;
  std::string mode = "analytic";
  bool no_chart = false;
  auto* reproduce = app.add_subcommand("reproduce", "Run the six reference traces and write CSV and charts");
  reproduce->add_option("--out", repro_out, "Output directory");
  reproduce->add_option("--fig", fig, "Only the (a, b) pair of figure 3 or 4")->check(CLI::IsMember({3, 4}));
  reproduce->add_option("--band", repro_band, "Settling band as a fraction of steady state");
  reproduce->add_option("--mode", mode, "analytic or physical");
  reproduce->add_flag("--no-chart", no_chart, "Skip SVG charts");

  std::vector<double> a_values{-0.9, -0.7, -0.5, -0.3, -0.2, -0.1, 0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.2};
  std::vector<double> b_values{-0.9, -0.5, -0.3, -0.1, 0.0, 0.1, 0.5, 0.9};
  auto* sweep = app.add_subcommand("sweep", "Grid of (a, b): stability, gain and settling epoch");
  sweep->add_option("--config", config, "Base configuration file")->required();
  sweep->add_option("--out", out, "Output directory (overrides out_dir)");
  sweep->add_option("--a-values", a_values, "Values of a")->delimiter(',');
  sweep->add_option("--b-values", b_values, "Values of b")->delimiter(',');
  sweep->add_option("--band", band, "Settling band as a fraction of steady state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*analyze) return cmd_analyze(config, band);
    if (*simulate) return cmd_simulate(config, out);
    if (*reproduce) return cmd_reproduce(repro_out, fig, repro_band, mode, !no_chart);
    if (*sweep) return cmd_sweep(config, out, a_values, b_values, band);
  } catch (const zflow::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == zflow::ErrorCode::Io ? kExitIo : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
