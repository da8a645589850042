#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "decouple/bath.hpp"
#include "decouple/control.hpp"
#include "decouple/redfield.hpp"

namespace decouple {

enum class Experiment { trace, trace_derivative, bloch_sweep, eta_ratio_sweep, full_protection_table };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

/// Fully resolved experiment description. Times are stored in units of the
/// gate time tau (control.tau == 1); tau_seconds and temperature_kelvin only
/// enter through beta * omega_c.
struct ScenarioConfig {
  Experiment experiment = Experiment::trace;
  double tau_seconds = 1e-10;
  double temperature_kelvin = 0.25;
  std::optional<double> beta_omega_c_override;
  double omega_c_tau = 0.0;  // 2 pi unless set

  ControlParams control;
  bool control_given = false;
  std::vector<ReservoirSpec> reservoirs;

  double theta = 0.0;
  double phi = 0.0;
  int n_theta = 25;
  int n_phi = 50;

  std::optional<int> steps;
  double tol = 1e-4;

  /// trace: one curve per case.
  std::vector<ControlParams> trace_cases;
  /// trace_derivative: dephasing ohmicities to compare.
  std::vector<int> derivative_s;
  /// eta_ratio_sweep / full_protection_table: ohmicities of the added
  /// bit-flip and dissipation baths.
  std::vector<int> added_s;
  int eta_points = 13;
  double eta_min = 1e-3;
  double eta_max = 1.0;
  bool eta_include_zero = true;
  /// full_protection_table: eta_1 / eta_3 = eta_2 / eta_3 of the added baths.
  double table_eta_ratio = 0.2;

  ThermalParams thermal() const;
  /// The dephasing reservoir (every experiment has one).
  const ReservoirSpec& dephasing() const;
  OpenSystem system(const ControlParams& control, std::vector<ReservoirSpec> reservoirs) const;
  /// steps from the file (or the default rule) for this control, validated.
  IntegratorConfig integrator_for(const ControlParams& control) const;
  /// Resolved settings as key/value pairs for output headers.
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

/// Parses the flat "key = value" scenario format. '#' starts a comment.
/// Throws ParseError (with line number) for malformed lines and duplicate
/// keys, ValidationError naming the key for unknown keys or bad values, and
/// ConfigError for duplicate reservoir classes.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace decouple
