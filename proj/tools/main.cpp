// decouple-sim: batch driver for the dynamically decoupled Hadamard gate.
//
//   decouple-sim run <scenario> [--threads N] [--out-dir DIR] [--steps N] [--tol X] [--plot]
//   decouple-sim verify
//   decouple-sim plot <csv> --kind line|heatmap [-o out.svg]
//
// Exit codes: 0 success, 2 invalid input (scenario, CSV, arguments),
// 3 convergence failure, 1 anything else.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "decouple/csv.hpp"
#include "decouple/errors.hpp"
#include "decouple/experiments.hpp"
#include "decouple/parallel.hpp"
#include "decouple/plot.hpp"
#include "decouple/scenario.hpp"
#include "decouple/verification.hpp"

namespace fs = std::filesystem;
using namespace decouple;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitConvergence = 3;

struct RunArgs {
  std::string scenario;
  std::optional<int> threads;
  std::string out_dir = ".";
  std::optional<int> steps;
  std::optional<double> tol;
  bool plot = false;
};

int run(const RunArgs& args) {
  const ScenarioConfig cfg = load_scenario(args.scenario);
  RunOptions opts;
  opts.threads = args.threads.value_or(default_thread_count());
  opts.steps = args.steps;
  opts.tol = args.tol;
  if (opts.threads < 1) throw ValidationError("--threads", "must be >= 1");

  const ExperimentResult res = run_experiment(cfg, opts);
  fs::create_directories(args.out_dir);
  for (const NamedTable& t : res.tables) {
    const fs::path csv = fs::path(args.out_dir) / (t.stem + ".csv");
    write_csv(csv, t.table);
    std::cout << "wrote " << csv.string() << "\n";
    if (args.plot && t.plottable) {
      const fs::path svg = fs::path(args.out_dir) / (t.stem + ".svg");
      emit_plot(t.table, t.plot, svg, PlotOptions{t.stem, "", "", ""});
      std::cout << "wrote " << svg.string() << "\n";
    }
  }
  for (const SweepResult& s : res.sweeps) {
    std::cout << s.label << ": min F(tau) = " << format_number(s.min_fidelity) << " at theta = "
              << format_number(s.argmin_theta) << ", phi = " << format_number(s.argmin_phi) << "\n";
  }
  for (const std::string& w : res.warnings) std::cerr << "warning: " << w << "\n";
  return res.converged ? 0 : kExitConvergence;
}

int verify() {
  int failed = 0;
  auto report = [&](const std::vector<CheckResult>& checks) {
    for (const CheckResult& c : checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      if (!c.passed) ++failed;
    }
  };
  report(kernel_oracle_checks());
  report(field_synthesis_checks());
  report(invariant_checks());
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << "\n";
  return failed == 0 ? 0 : kExitFailure;
}

int plot(const std::string& csv, const std::string& kind, std::string out) {
  const CsvTable table = read_csv(fs::path(csv));
  if (out.empty()) out = fs::path(csv).replace_extension(".svg").string();
  emit_plot(table, parse_plot_kind(kind), fs::path(out), PlotOptions{fs::path(csv).stem().string(), "", "", ""});
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate a dynamically decoupled Hadamard gate on a qubit coupled to bosonic baths"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a scenario file");
  run_cmd->add_option("scenario", run_args.scenario, "Scenario file")->required();
  run_cmd->add_option("--threads", run_args.threads, "Worker threads (default: DECOUPLE_SIM_THREADS or all cores)");
  run_cmd->add_option("--out-dir", run_args.out_dir, "Directory for CSV/SVG output");
  run_cmd->add_option("--steps", run_args.steps, "Override integrator.steps");
  run_cmd->add_option("--tol", run_args.tol, "Override integrator.tol");
  run_cmd->add_flag("--plot", run_args.plot, "Also render SVG plots");

  app.add_subcommand("verify", "Run the oracle and invariant self-checks");

  std::string plot_csv, plot_kind, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render a runner CSV as SVG");
  plot_cmd->add_option("csv", plot_csv, "Input CSV")->required();
  plot_cmd->add_option("--kind", plot_kind, "line or heatmap")->required();
  plot_cmd->add_option("-o,--output", plot_out, "Output SVG (default: CSV path with .svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*run_cmd) return run(run_args);
    if (app.got_subcommand("verify")) return verify();
    if (*plot_cmd) return plot(plot_csv, plot_kind, plot_out);
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const ConfigError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
