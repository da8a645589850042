#include "decouple/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "decouple/errors.hpp"
#include "decouple/parallel.hpp"

namespace decouple {

namespace {

using std::numbers::pi;

std::string case_label(const ControlParams& c) {
  switch (c.mode) {
    case ControlMode::bare: return "bare";
    case ControlMode::dephasing_protect: return "n" + std::to_string(c.n);
    case ControlMode::full_protect: return "n" + std::to_string(c.n) + "_m" + std::to_string(c.m);
  }
  return "?";
}

double resolve_tol(const ScenarioConfig& cfg, const RunOptions& opts) { return opts.tol.value_or(cfg.tol); }

/// One step count for every control in the experiment so that all curves
/// share a time axis: the override, else the largest default.
IntegratorConfig resolve_integrator(const ScenarioConfig& cfg, const RunOptions& opts,
                                    const std::vector<ControlParams>& controls) {
  IntegratorConfig ic;
  ic.convergence_tol = resolve_tol(cfg, opts);
  if (opts.steps) {
    ic.steps = *opts.steps;
  } else if (cfg.steps) {
    ic.steps = *cfg.steps;
  } else {
    ic.steps = 0;
    for (const auto& c : controls) ic.steps = std::max(ic.steps, IntegratorConfig::defaults(c).steps);
  }
  for (const auto& c : controls) ic.validate(c);
  return ic;
}

void header(CsvTable& t, const ScenarioConfig& cfg, const IntegratorConfig& ic) {
  for (auto& [k, v] : cfg.resolved()) {
    if (k == "integrator.steps") continue;
    t.add_metadata(k, v);
  }
  t.add_metadata("integrator.steps", std::to_string(ic.steps));
  t.add_metadata("integrator.refined_steps", ic.check_convergence ? std::to_string(2 * ic.steps) : "none");
  t.add_metadata("integrator.tol", format_number(ic.convergence_tol));
  t.add_metadata("grid.half_step_nodes", std::to_string(2 * ic.steps + 1));
}

ReservoirSpec added_bath(ErrorClass c, double eta, int s, double omega_c) {
  ReservoirSpec r;
  r.error_class = c;
  r.eta = eta;
  r.s = s;
  r.omega_c = omega_c;
  return r;
}

std::vector<ReservoirSpec> with_added_baths(const ReservoirSpec& dephasing, double eta, int s) {
  return {added_bath(ErrorClass::bit_flip, eta, s, dephasing.omega_c),
          added_bath(ErrorClass::dissipation, eta, s, dephasing.omega_c), dephasing};
}

void note_convergence(ExperimentResult& res, const std::string& what, bool converged, double delta) {
  if (converged) return;
  res.converged = false;
  res.warnings.push_back(what + ": step doubling changed F(tau) by " + format_number(delta));
}

}  // namespace

CsvTable SweepResult::to_csv() const {
  CsvTable t;
  t.columns = {"theta", "phi", "fidelity"};
  for (std::size_t i = 0; i < theta.size(); ++i) {
    for (std::size_t j = 0; j < phi.size(); ++j) t.add_row({theta[i], phi[j], fidelity_at(i, j)});
  }
  t.add_metadata("sweep.label", label);
  t.add_metadata("min_fidelity", format_number(min_fidelity));
  t.add_metadata("argmin_theta", format_number(argmin_theta));
  t.add_metadata("argmin_phi", format_number(argmin_phi));
  if (!refined_fidelity.empty()) t.add_metadata("refined_min_fidelity", format_number(refined_min_fidelity));
  t.add_metadata("max_convergence_delta", format_number(max_convergence_delta));
  t.add_metadata("converged", converged ? "true" : "false");
  t.add_metadata("min_eigenvalue", format_number(min_eigenvalue));
  return t;
}

SweepResult bloch_sweep(const OpenSystem& system, int n_theta, int n_phi, const IntegratorConfig& cfg,
                        DecoherenceCache& cache, int threads) {
  if (n_theta < 2 || n_phi < 1) throw ValidationError("sweep", "need n_theta >= 2 and n_phi >= 1");
  cfg.validate(system.control);
  SweepResult res;
  res.label = system.control.describe();
  for (int i = 0; i < n_theta; ++i) res.theta.push_back(pi * i / (n_theta - 1));
  for (int j = 0; j < n_phi; ++j) res.phi.push_back(2.0 * pi * j / n_phi);

  const GeneratorTable table(cache.assemble(system, cfg.steps));
  std::optional<GeneratorTable> refined;
  if (cfg.check_convergence) refined.emplace(cache.assemble(system, 2 * cfg.steps));

  const std::size_t nodes = static_cast<std::size_t>(n_theta) * n_phi;
  res.fidelity.assign(nodes, 0.0);
  std::vector<double> min_eig(nodes, 0.5);
  if (refined) res.refined_fidelity.assign(nodes, 0.0);
  parallel_for(nodes, threads, [&](std::size_t k) {
    const QubitState rho0 = density_from_bloch(res.theta[k / n_phi], res.phi[k % n_phi]);
    const Vec3 r0 = rho0.bloch();
    const Endpoint e = propagate_endpoint(r0, table);
    res.fidelity[k] = overlap(QubitState::from_bloch(e.bloch), rho0);
    min_eig[k] = e.min_eigenvalue;
    if (refined) {
      const Endpoint e2 = propagate_endpoint(r0, *refined);
      res.refined_fidelity[k] = overlap(QubitState::from_bloch(e2.bloch), rho0);
    }
  });

  const auto it = std::min_element(res.fidelity.begin(), res.fidelity.end());
  const auto k = static_cast<std::size_t>(it - res.fidelity.begin());
  res.min_fidelity = *it;
  res.argmin_theta = res.theta[k / n_phi];
  res.argmin_phi = res.phi[k % n_phi];
  res.min_eigenvalue = *std::min_element(min_eig.begin(), min_eig.end());
  if (refined) {
    res.refined_min_fidelity = *std::min_element(res.refined_fidelity.begin(), res.refined_fidelity.end());
    for (std::size_t i = 0; i < nodes; ++i) {
      res.max_convergence_delta = std::max(res.max_convergence_delta, std::abs(res.refined_fidelity[i] - res.fidelity[i]));
    }
    res.converged = res.max_convergence_delta <= cfg.convergence_tol;
  }
  return res;
}

ExperimentResult run_trace(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache) {
  const IntegratorConfig ic = resolve_integrator(cfg, opts, cfg.trace_cases);
  const QubitState rho0 = density_from_bloch(cfg.theta, cfg.phi);
  ExperimentResult res;
  NamedTable out{"trace", {}};
  header(out.table, cfg, ic);
  out.table.columns.push_back("t/tau");

  std::vector<Trajectory> trajectories;
  for (const auto& c : cfg.trace_cases) {
    const OpenSystem sys = cfg.system(c, cfg.reservoirs);
    const GeneratorTable table(cache.assemble(sys, ic.steps));
    const GeneratorTable refined(cache.assemble(sys, 2 * ic.steps));
    trajectories.push_back(evolve(rho0, table, &refined, ic.convergence_tol));
    const Trajectory& tr = trajectories.back();
    const std::string label = case_label(c);
    out.table.columns.push_back("F_" + label);
    out.table.add_metadata("final_fidelity." + label, format_number(tr.final_fidelity()));
    out.table.add_metadata("refined_final_fidelity." + label, format_number(*tr.refined_final_fidelity));
    out.table.add_metadata("converged." + label, tr.converged ? "true" : "false");
    out.table.add_metadata("min_eigenvalue." + label, format_number(tr.min_eigenvalue));
    note_convergence(res, "trace " + label, tr.converged, tr.convergence_delta);
  }
  for (std::size_t k = 0; k < trajectories.front().times.size(); ++k) {
    std::vector<double> row{trajectories.front().times[k]};
    for (const auto& tr : trajectories) row.push_back(tr.fidelity[k]);
    out.table.add_row(std::move(row));
  }
  res.tables.push_back(std::move(out));
  return res;
}

ExperimentResult run_trace_derivative(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache) {
  const IntegratorConfig ic = resolve_integrator(cfg, opts, {cfg.control});
  const QubitState rho0 = density_from_bloch(cfg.theta, cfg.phi);
  ExperimentResult res;
  NamedTable out{"trace_derivative", {}};
  header(out.table, cfg, ic);
  out.table.columns.push_back("t/tau");

  std::vector<std::vector<std::pair<double, double>>> curves;
  for (int s : cfg.derivative_s) {
    std::vector<ReservoirSpec> rs = cfg.reservoirs;
    for (auto& r : rs) {
      if (r.error_class == ErrorClass::dephasing) r.s = s;
    }
    const OpenSystem sys = cfg.system(cfg.control, rs);
    const DecoherenceTable d = cache.assemble(sys, ic.steps);
    const GeneratorTable refined(cache.assemble(sys, 2 * ic.steps));
    const Trajectory tr = evolve(rho0, GeneratorTable(d), &refined, ic.convergence_tol);
    curves.push_back(fidelity_derivative(tr, rho0, d));
    const std::string label = "s" + std::to_string(s);
    out.table.columns.push_back("dFdt_" + label);
    out.table.add_metadata("final_fidelity." + label, format_number(tr.final_fidelity()));
    out.table.add_metadata("converged." + label, tr.converged ? "true" : "false");
    note_convergence(res, "trace_derivative " + label, tr.converged, tr.convergence_delta);
  }
  for (std::size_t k = 0; k < curves.front().size(); ++k) {
    std::vector<double> row{curves.front()[k].first};
    for (const auto& c : curves) row.push_back(c[k].second);
    out.table.add_row(std::move(row));
  }
  res.tables.push_back(std::move(out));
  return res;
}

ExperimentResult run_bloch_sweep(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache) {
  const IntegratorConfig ic = resolve_integrator(cfg, opts, {cfg.control});
  const OpenSystem sys = cfg.system(cfg.control, cfg.reservoirs);
  ExperimentResult res;
  SweepResult sweep = bloch_sweep(sys, cfg.n_theta, cfg.n_phi, ic, cache, opts.threads);
  NamedTable out{"bloch_sweep", sweep.to_csv(), PlotKind::heatmap};
  CsvTable& t = out.table;
  CsvTable h;
  header(h, cfg, ic);
  t.metadata.insert(t.metadata.begin(), h.metadata.begin(), h.metadata.end());
  note_convergence(res, "bloch_sweep", sweep.converged, sweep.max_convergence_delta);
  res.tables.push_back(std::move(out));
  res.sweeps.push_back(std::move(sweep));
  return res;
}

std::vector<double> eta_ratio_grid(const ScenarioConfig& cfg) {
  std::vector<double> out;
  if (cfg.eta_include_zero) out.push_back(0.0);
  if (cfg.eta_points == 1) {
    out.push_back(cfg.eta_min);
    return out;
  }
  const double a = std::log10(cfg.eta_min), b = std::log10(cfg.eta_max);
  for (int i = 0; i < cfg.eta_points; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (cfg.eta_points - 1)));
  return out;
}

ExperimentResult run_eta_ratio_sweep(const ScenarioConfig& cfg, const RunOptions& opts, DecoherenceCache& cache) {
  const IntegratorConfig ic = resolve_integrator(cfg, opts, {cfg.control});
  const ReservoirSpec& dephasing = cfg.dephasing();
  const std::vector<double> ratios = eta_ratio_grid(cfg);
  ExperimentResult res;
  NamedTable out{"eta_ratio_sweep", {}};
  header(out.table, cfg, ic);
  out.table.columns.push_back("eta_ratio");
  for (int s : cfg.added_s) out.table.columns.push_back("minF_added_s" + std::to_string(s));

  std::vector<std::vector<double>> columns(cfg.added_s.size());
  double worst_delta = 0.0;
  for (std::size_t a = 0; a < cfg.added_s.size(); ++a) {
    for (double ratio : ratios) {
      const OpenSystem sys =
          cfg.system(cfg.control, with_added_baths(dephasing, ratio * dephasing.eta, cfg.added_s[a]));
      const SweepResult sweep = bloch_sweep(sys, cfg.n_theta, cfg.n_phi, ic, cache, opts.threads);
      columns[a].push_back(sweep.min_fidelity);
      worst_delta = std::max(worst_delta, sweep.max_convergence_delta);
      note_convergence(res, "eta_ratio_sweep s=" + std::to_string(cfg.added_s[a]) + " ratio=" + format_number(ratio),
                       sweep.converged, sweep.max_convergence_delta);
    }
  }
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    std::vector<double> row{ratios[i]};
    for (const auto& c : columns) row.push_back(c[i]);
    out.table.add_row(std::move(row));
  }
  out.table.add_metadata("max_convergence_delta", format_number(worst_delta));
  out.table.add_metadata("converged", res.converged ? "true" : "false");
  res.tables.push_back(std::move(out));
  return res;
}

ExperimentResult run_full_protection_table(const ScenarioConfig& cfg, const RunOptions& opts,
                                           DecoherenceCache& cache) {
  const ControlParams dephasing_field = ControlParams::dephasing(cfg.control.n, cfg.control.tau);
  const ControlParams full_field = ControlParams::full(cfg.control.n, cfg.control.m, cfg.control.tau);
  const IntegratorConfig ic = resolve_integrator(cfg, opts, {dephasing_field, full_field});
  ExperimentResult res;
  NamedTable out{"full_protection_table", {}, PlotKind::line, false};
  header(out.table, cfg, ic);
  out.table.add_metadata("field_code", "0 = dephasing-only field, 1 = full three-component field");
  out.table.columns = {"added_s", "field_code", "min_fidelity", "argmin_theta", "argmin_phi", "refined_min_fidelity"};
  for (int s : cfg.added_s) {
    int code = 0;
    for (const ControlParams& field : {dephasing_field, full_field}) {
      const double eta_added = cfg.table_eta_ratio * cfg.dephasing().eta;
      const OpenSystem sys = cfg.system(field, with_added_baths(cfg.dephasing(), eta_added, s));
      SweepResult sweep = bloch_sweep(sys, cfg.n_theta, cfg.n_phi, ic, cache, opts.threads);
      out.table.add_row({static_cast<double>(s), static_cast<double>(code), sweep.min_fidelity, sweep.argmin_theta,
                         sweep.argmin_phi, sweep.refined_min_fidelity});
      note_convergence(res, "full_protection_table s=" + std::to_string(s) + " " + field.describe(), sweep.converged,
                       sweep.max_convergence_delta);
      sweep.label = "added_s" + std::to_string(s) + " " + field.describe();
      res.sweeps.push_back(std::move(sweep));
      ++code;
    }
  }
  out.table.add_metadata("converged", res.converged ? "true" : "false");
  res.tables.push_back(std::move(out));
  return res;
}

ExperimentResult run_experiment(const ScenarioConfig& cfg, const RunOptions& opts) {
  DecoherenceCache cache(opts.threads);
  switch (cfg.experiment) {
    case Experiment::trace: return run_trace(cfg, opts, cache);
    case Experiment::trace_derivative: return run_trace_derivative(cfg, opts, cache);
    case Experiment::bloch_sweep: return run_bloch_sweep(cfg, opts, cache);
    case Experiment::eta_ratio_sweep: return run_eta_ratio_sweep(cfg, opts, cache);
    case Experiment::full_protection_table: return run_full_protection_table(cfg, opts, cache);
  }
  throw UsageError("unknown experiment");
}

}  // namespace decouple
