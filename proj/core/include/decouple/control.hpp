#pragma once

#include <string>
#include <string_view>

#include "decouple/su2.hpp"

namespace decouple {

enum class ControlMode { bare, dephasing_protect, full_protect };

std::string_view to_string(ControlMode mode);
/// Throws ValidationError for unknown names.
ControlMode parse_control_mode(std::string_view name);

/// Drive configuration for a Hadamard gate of duration tau.
///
/// n winds the sigma_x decoupler, m the sigma_z decoupler (full_protect
/// only). Times passed to the functions below share the unit of tau; fields
/// come back in inverse units of tau.
struct ControlParams {
  double tau = 1.0;
  ControlMode mode = ControlMode::bare;
  int n = 0;
  int m = 0;

  static ControlParams bare(double tau = 1.0) { return {tau, ControlMode::bare, 0, 0}; }
  static ControlParams dephasing(int n, double tau = 1.0) { return {tau, ControlMode::dephasing_protect, n, 0}; }
  static ControlParams full(int n, int m, double tau = 1.0) { return {tau, ControlMode::full_protect, n, m}; }

  /// Throws ValidationError when tau <= 0, n < 1 for protected modes, or
  /// m < 1 / m == n for full_protect.
  void validate() const;

  /// 4 max(n, m) + 1: the number of fastest field oscillations over [0, tau]
  /// (bounded by the decoupler harmonics plus the gate drive).
  int winding_bound() const;

  std::string describe() const;
};

/// U_0(t) = I cos(pi t / 2 tau) - i (sigma_x + sigma_z)/sqrt2 sin(pi t / 2 tau).
QubitUnitary gate_unitary(double t, const ControlParams& p);
/// U_c(t); the identity at t = tau in every mode.
QubitUnitary decoupler_unitary(double t, const ControlParams& p);
/// U(t) = U_c(t) U_0(t).
QubitUnitary total_unitary(double t, const ControlParams& p);
/// Analytic dU/dt of total_unitary.
Mat2 total_unitary_derivative(double t, const ControlParams& p);

/// Closed-form driving field of total_unitary.
FieldVector control_field(double t, const ControlParams& p);

/// The path t -> total_unitary(t) with its analytic derivative. The
/// evaluators are not range-checked so finite-difference stencils may step
/// slightly outside [0, tau].
UnitaryPath total_unitary_path(const ControlParams& p);
/// Same curve without the analytic derivative (finite-difference fallback).
UnitaryPath total_unitary_path_numeric(const ControlParams& p);

/// Distance from U(tau) to the Hadamard (sigma_x + sigma_z)/sqrt2 after
/// removing the best global phase.
double gate_error(const ControlParams& p);
/// gate_error(p) <= 1e-10.
bool verify_gate(const ControlParams& p);

}  // namespace decouple
