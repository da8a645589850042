#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decouple/csv.hpp"
#include "decouple/plot.hpp"
#include "decouple/redfield.hpp"
#include "decouple/scenario.hpp"

namespace decouple {

/// Final fidelities over a polar grid of pure initial states,
/// theta_i = pi i / (n_theta - 1), phi_j = 2 pi j / n_phi, row-major in theta.
struct SweepResult {
  std::string label;
  std::vector<double> theta;
  std::vector<double> phi;
  std::vector<double> fidelity;
  /// Same nodes integrated with 2N steps (empty when not checked).
  std::vector<double> refined_fidelity;
  double min_fidelity = 1.0;
  double argmin_theta = 0.0;
  double argmin_phi = 0.0;
  double refined_min_fidelity = 1.0;
  double max_convergence_delta = 0.0;
  double min_eigenvalue = 0.5;
  bool converged = true;

  double fidelity_at(std::size_t i_theta, std::size_t j_phi) const { return fidelity[i_theta * phi.size() + j_phi]; }
  /// Long format (theta, phi, fidelity) with the summary in the metadata.
  CsvTable to_csv() const;
};

/// One trajectory per grid node, all sharing the D tables from `cache`.
SweepResult bloch_sweep(const OpenSystem& system, int n_theta, int n_phi, const IntegratorConfig& cfg,
                        DecoherenceCache& cache, int threads);

struct RunOptions {
  int threads = 1;
  std::optional<int> steps;
  std::optional<double> tol;
};

struct NamedTable {
  std::string stem;
  CsvTable table;
  PlotKind plot = PlotKind::line;
  bool plottable = true;
};

struct ExperimentResult {
  std::vector<NamedTable> tables;
  std::vector<SweepResult> sweeps;
  bool converged = true;
  std::vector<std::string> warnings;
};

ExperimentResult run_trace(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache);
ExperimentResult run_trace_derivative(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache);
ExperimentResult run_bloch_sweep(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache);
ExperimentResult run_eta_ratio_sweep(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache);
ExperimentResult run_full_protection_table(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache);

/// Dispatches on cfg.experiment.
ExperimentResult run_experiment(const ScenarioConfig& cfg, const RunOptions& opts);

/// Eta ratios of the sweep: optional 0 followed by a log-spaced grid.
std::vector<double> eta_ratio_grid(const ScenarioConfig& cfg);

}  // namespace decouple
