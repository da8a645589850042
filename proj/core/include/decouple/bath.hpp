#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "decouple/su2.hpp"

namespace decouple {

enum class ErrorClass { bit_flip, dissipation, dephasing };

std::string_view to_string(ErrorClass c);
/// Throws ValidationError for unknown names.
ErrorClass parse_error_class(std::string_view name);

/// One bosonic reservoir with spectral density
///   J(w) = eta w^s / omega_c^(s-1) exp(-w / omega_c).
/// The error vector is fixed by the class: x for bit flips, (x + iy)/2 for
/// dissipation, z for dephasing.
struct ReservoirSpec {
  ErrorClass error_class = ErrorClass::dephasing;
  double eta = 0.0;
  int s = 1;
  double omega_c = 1.0;

  Vec3c lambda() const;
  /// Same reservoir with eta = 1.
  ReservoirSpec unit_coupling() const;
  void validate() const;
};

/// Throws ConfigError when two reservoirs share an error class, or when any
/// reservoir fails validation.
void validate_reservoirs(const std::vector<ReservoirSpec>& reservoirs);

/// hbar / k_B in s K (CODATA 2018, exact).
inline constexpr double kHbarOverBoltzmann = 1.054571817e-34 / 1.380649e-23;

/// Inverse temperature in units of the cutoff, beta * omega_c.
struct ThermalParams {
  double beta_omega_c = 1.0;
  std::optional<double> temperature_kelvin;
  std::optional<double> tau_seconds;

  /// beta omega_c = (hbar / k_B) (omega_c tau) / (tau T).
  static ThermalParams from_physical(double temperature_kelvin, double tau_seconds, double omega_c_tau);
  void validate() const;
};

double spectral_density(double omega, const ReservoirSpec& r);
/// 1 / (exp(beta omega) - 1); omega > 0 and beta > 0.
double thermal_occupation(double omega, double beta);

/// int_0^inf J(w) exp(-i w delta) dw = eta omega_c^2 s! / (1 + i omega_c delta)^(s+1).
cplx kernel_vacuum(double delta, const ReservoirSpec& r);

struct ThermalSum {
  cplx value;
  long terms = 0;
  /// Bound on the neglected remainder relative to |value|.
  double relative_tail_bound = 0.0;
};

/// int_0^inf J(w) n(w) exp(-i w delta) dw as the series
///   eta omega_c^2 sum_k s! / [1 + i omega_c delta + beta omega_c (k + 1)]^(s+1),
/// summed directly with an Euler-Maclaurin tail until the remainder bound
/// drops below 1e-12 of the sum. Throws ConvergenceError past 1e7 terms.
ThermalSum kernel_thermal_sum(double delta, const ReservoirSpec& r, const ThermalParams& th);
cplx kernel_thermal(double delta, const ReservoirSpec& r, const ThermalParams& th);

/// Thermal two-time averages of one reservoir:
///   i1 = <B^dag(t') B(t)>,  i2 = <B(t') B^dag(t)>,  delta = t - t'.
struct Autocorrelations {
  cplx i1;
  cplx i2;
};
Autocorrelations bath_autocorrelations(double delta, const ReservoirSpec& r, const ThermalParams& th);

/// C(delta)_{mu nu} = sum_i lambda_mu conj(lambda_nu) i1 + conj(lambda_mu) lambda_nu i2.
Mat3c correlation_matrix(const std::vector<Autocorrelations>& kernels, const std::vector<ReservoirSpec>& reservoirs);
Mat3c correlation_matrix(double delta, const std::vector<ReservoirSpec>& reservoirs, const ThermalParams& th);

/// Rank-one piece left * right^T * f(delta) of the correlation matrix of one
/// reservoir, where f is i1, i2 or their sum. Real error vectors need a
/// single term, complex ones two.
struct CorrelationTerm {
  enum class Kernel { i1, i2, sum };
  Vec3c left;
  Vec3c right;
  Kernel kernel;

  cplx weight(const Autocorrelations& a) const;
};
std::vector<CorrelationTerm> correlation_terms(const ReservoirSpec& r);

}  // namespace decouple
