#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decouple/bath.hpp"
#include "decouple/control.hpp"

namespace decouple {

/// Outcome of one self-check. `worst` is the largest observed deviation in
/// the units of `tolerance`.
struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Adaptive Gauss-Kronrod evaluation of int_0^inf J(w) exp(-i w delta) dw,
/// independent of the closed form.
cplx quadrature_vacuum_kernel(double delta, const ReservoirSpec& r);
/// Same for int_0^inf J(w) n(w) exp(-i w delta) dw.
cplx quadrature_thermal_kernel(double delta, const ReservoirSpec& r, const ThermalParams& th);

/// Closed-form kernels against quadrature at ten (delta, s) probes,
/// relative tolerance 1e-8.
std::vector<CheckResult> kernel_oracle_checks();
/// control_field against i (dU/dt) U^dag from finite differences at
/// `samples` random times per mode, relative tolerance 1e-6.
std::vector<CheckResult> field_synthesis_checks(int samples = 200, std::uint64_t seed = 20240611);
/// Trace, Hermiticity, zero coupling, rotation orthogonality, the
/// decoupling integral and gate closure.
std::vector<CheckResult> invariant_checks();

/// int_0^{t_c} U_c^dag(t) sigma U_c(t) dt by composite Simpson with
/// `panels` panels; returns the largest entry magnitude.
double decoupling_integral_residual(const ControlParams& p, int pauli, double t_c, int panels = 2048);

/// The (n, m) pairs the experiments use.
std::vector<ControlParams> experiment_controls();

}  // namespace decouple
