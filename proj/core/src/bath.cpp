#include "decouple/bath.hpp"

#include <cmath>
#include <sstream>

#include "decouple/errors.hpp"

namespace decouple {

namespace {

const cplx kI{0.0, 1.0};

double factorial(int s) {
  double f = 1.0;
  for (int k = 2; k <= s; ++k) f *= k;
  return f;
}

cplx ipow(cplx z, int p) {
  cplx r{1.0, 0.0};
  for (int k = 0; k < p; ++k) r *= z;
  return r;
}

constexpr long kMaxTerms = 10'000'000;
constexpr double kTailTolerance = 1e-12;

}  // namespace

std::string_view to_string(ErrorClass c) {
  switch (c) {
    case ErrorClass::bit_flip: return "bit_flip";
    case ErrorClass::dissipation: return "dissipation";
    case ErrorClass::dephasing: return "dephasing";
  }
  return "?";
}

ErrorClass parse_error_class(std::string_view name) {
  if (name == "bit_flip") return ErrorClass::bit_flip;
  if (name == "dissipation") return ErrorClass::dissipation;
  if (name == "dephasing") return ErrorClass::dephasing;
  throw ValidationError("class", "unknown error class '" + std::string(name) +
                                     "' (expected bit_flip, dissipation or dephasing)");
}

Vec3c ReservoirSpec::lambda() const {
  switch (error_class) {
    case ErrorClass::bit_flip: return Vec3c(1.0, 0.0, 0.0);
    case ErrorClass::dissipation: return Vec3c(0.5, 0.5 * kI, 0.0);
    case ErrorClass::dephasing: return Vec3c(0.0, 0.0, 1.0);
  }
  return Vec3c::Zero();
}

ReservoirSpec ReservoirSpec::unit_coupling() const {
  ReservoirSpec r = *this;
  r.eta = 1.0;
  return r;
}

void ReservoirSpec::validate() const {
  const std::string key = std::string(to_string(error_class));
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ValidationError(key + ".eta", "coupling must be finite and >= 0");
  if (s < 1 || s > 12) throw ValidationError(key + ".s", "ohmicity exponent must be an integer in [1, 12]");
  if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw ValidationError(key + ".omega_c", "cutoff must be positive");
}

void validate_reservoirs(const std::vector<ReservoirSpec>& reservoirs) {
  for (std::size_t i = 0; i < reservoirs.size(); ++i) {
    reservoirs[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (reservoirs[i].error_class == reservoirs[j].error_class) {
        throw ConfigError("duplicate reservoir for error class '" + std::string(to_string(reservoirs[i].error_class)) +
                          "'");
      }
    }
  }
}

ThermalParams ThermalParams::from_physical(double temperature_kelvin, double tau_seconds, double omega_c_tau) {
  if (!(temperature_kelvin > 0.0)) throw ValidationError("temperature_kelvin", "temperature must be positive");
  if (!(tau_seconds > 0.0)) throw ValidationError("tau_seconds", "gate time must be positive");
  ThermalParams th;
  th.beta_omega_c = kHbarOverBoltzmann * omega_c_tau / (tau_seconds * temperature_kelvin);
  th.temperature_kelvin = temperature_kelvin;
  th.tau_seconds = tau_seconds;
  return th;
}

void ThermalParams::validate() const {
  if (!(beta_omega_c > 0.0) || !std::isfinite(beta_omega_c)) {
    throw ValidationError("beta_omega_c", "inverse temperature must be positive and finite");
  }
}

double spectral_density(double omega, const ReservoirSpec& r) {
  if (!(omega >= 0.0)) throw DomainError("spectral density needs omega >= 0");
  return r.eta * std::pow(omega, r.s) / std::pow(r.omega_c, r.s - 1) * std::exp(-omega / r.omega_c);
}

double thermal_occupation(double omega, double beta) {
  if (!(omega > 0.0)) throw DomainError("Bose occupation needs omega > 0");
  if (!(beta > 0.0)) throw DomainError("Bose occupation needs beta > 0");
  return 1.0 / std::expm1(beta * omega);
}

cplx kernel_vacuum(double delta, const ReservoirSpec& r) {
  const cplx z = 1.0 + kI * (r.omega_c * delta);
  return r.eta * r.omega_c * r.omega_c * factorial(r.s) / ipow(z, r.s + 1);
}

ThermalSum kernel_thermal_sum(double delta, const ReservoirSpec& r, const ThermalParams& th) {
  th.validate();
  // f(k) = (a + b k)^(-p) with a = 1 + i w_c delta + b, b = beta w_c.
  const int p = r.s + 1;
  const double b = th.beta_omega_c;
  const cplx a = 1.0 + kI * (r.omega_c * delta) + b;
  // Euler-Maclaurin remainder after the f' correction: |f'''(K)| / 720,
  // doubled because f is complex and need not be monotone.
  const double remainder_coeff = 2.0 / 720.0 * p * (p + 1.0) * (p + 2.0) * b * b * b;

  cplx partial{0.0, 0.0};
  ThermalSum out;
  for (long k = 0; k < kMaxTerms; ++k) {
    const cplx z = a + b * static_cast<double>(k);
    if (k >= 4) {
      // Tail estimate for sum_{j >= k} f(j).
      const cplx zp = ipow(z, p);
      const cplx tail = z / (zp * (b * (p - 1.0))) + 0.5 / zp + p * b / (12.0 * zp * z);
      const cplx total = partial + tail;
      const double bound = remainder_coeff / std::pow(std::abs(z), p + 3);
      const double scale = std::abs(total);
      if (bound <= kTailTolerance * scale || scale == 0.0) {
        out.value = r.eta * r.omega_c * r.omega_c * factorial(r.s) * total;
        out.terms = k;
        out.relative_tail_bound = scale > 0.0 ? bound / scale : 0.0;
        return out;
      }
    }
    partial += 1.0 / ipow(z, p);
  }
  const cplx z = a + b * static_cast<double>(kMaxTerms);
  const double achieved = remainder_coeff / std::pow(std::abs(z), p + 3) / std::abs(partial);
  std::ostringstream os;
  os << "thermal kernel sum did not reach relative tail bound " << kTailTolerance << " within " << kMaxTerms
     << " terms (achieved " << achieved << ", beta*omega_c = " << b << ")";
  throw ConvergenceError(os.str(), achieved);
}

cplx kernel_thermal(double delta, const ReservoirSpec& r, const ThermalParams& th) {
  return kernel_thermal_sum(delta, r, th).value;
}

Autocorrelations bath_autocorrelations(double delta, const ReservoirSpec& r, const ThermalParams& th) {
  const cplx thermal = kernel_thermal(delta, r, th);
  return {thermal, std::conj(thermal) + std::conj(kernel_vacuum(delta, r))};
}

Mat3c correlation_matrix(const std::vector<Autocorrelations>& kernels, const std::vector<ReservoirSpec>& reservoirs) {
  Mat3c c = Mat3c::Zero();
  for (std::size_t i = 0; i < reservoirs.size(); ++i) {
    const Vec3c l = reservoirs[i].lambda();
    c += l * l.adjoint() * kernels[i].i1 + l.conjugate() * l.transpose() * kernels[i].i2;
  }
  return c;
}

Mat3c correlation_matrix(double delta, const std::vector<ReservoirSpec>& reservoirs, const ThermalParams& th) {
  validate_reservoirs(reservoirs);
  std::vector<Autocorrelations> kernels;
  kernels.reserve(reservoirs.size());
  for (const auto& r : reservoirs) kernels.push_back(bath_autocorrelations(delta, r, th));
  return correlation_matrix(kernels, reservoirs);
}

cplx CorrelationTerm::weight(const Autocorrelations& a) const {
  switch (kernel) {
    case Kernel::i1: return a.i1;
    case Kernel::i2: return a.i2;
    case Kernel::sum: return a.i1 + a.i2;
  }
  return {};
}

std::vector<CorrelationTerm> correlation_terms(const ReservoirSpec& r) {
  const Vec3c l = r.lambda();
  if (l.imag().isZero(0.0)) return {{l, l, CorrelationTerm::Kernel::sum}};
  return {{l, l.conjugate(), CorrelationTerm::Kernel::i1}, {l.conjugate(), l, CorrelationTerm::Kernel::i2}};
}

}  // namespace decouple
