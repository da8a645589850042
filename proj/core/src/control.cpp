#include "decouple/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "decouple/errors.hpp"

namespace decouple {

namespace {

using std::numbers::pi;
using std::numbers::sqrt2;

const cplx kI{0.0, 1.0};

void check_range(double t, const ControlParams& p) {
  if (!(t >= 0.0 && t <= p.tau)) {
    std::ostringstream os;
    os << "time " << t << " outside the gate interval [0, " << p.tau << "]";
    throw RangeError(os.str());
  }
}

const Mat2& hadamard_generator() {
  static const Mat2 h = (pauli::x() + pauli::z()) / sqrt2;
  return h;
}

// cos(w x) I - i sin(w x) s, and its derivative with respect to x.
Mat2 winding(const Mat2& s, double w, double x) { return std::cos(w * x) * Mat2::Identity() - kI * std::sin(w * x) * s; }
Mat2 winding_dx(const Mat2& s, double w, double x) {
  return -w * std::sin(w * x) * Mat2::Identity() - kI * w * std::cos(w * x) * s;
}

// All formulas below take x = t / tau.
Mat2 gate_matrix(double x) { return winding(hadamard_generator(), pi / 2.0, x); }
Mat2 gate_matrix_dx(double x) { return winding_dx(hadamard_generator(), pi / 2.0, x); }

Mat2 decoupler_matrix(double x, const ControlParams& p) {
  switch (p.mode) {
    case ControlMode::bare: return Mat2::Identity();
    case ControlMode::dephasing_protect: return winding(pauli::x(), 2.0 * p.n * pi, x);
    case ControlMode::full_protect:
      return winding(pauli::x(), 2.0 * p.n * pi, x) * winding(pauli::z(), 2.0 * p.m * pi, x);
  }
  return Mat2::Identity();
}

Mat2 decoupler_matrix_dx(double x, const ControlParams& p) {
  switch (p.mode) {
    case ControlMode::bare: return Mat2::Zero();
    case ControlMode::dephasing_protect: return winding_dx(pauli::x(), 2.0 * p.n * pi, x);
    case ControlMode::full_protect: {
      const double wx = 2.0 * p.n * pi;
      const double wz = 2.0 * p.m * pi;
      return winding_dx(pauli::x(), wx, x) * winding(pauli::z(), wz, x) +
             winding(pauli::x(), wx, x) * winding_dx(pauli::z(), wz, x);
    }
  }
  return Mat2::Zero();
}

Mat2 total_matrix(double x, const ControlParams& p) { return decoupler_matrix(x, p) * gate_matrix(x); }

Mat2 total_matrix_dx(double x, const ControlParams& p) {
  return decoupler_matrix_dx(x, p) * gate_matrix(x) + decoupler_matrix(x, p) * gate_matrix_dx(x);
}

}  // namespace

std::string_view to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::bare: return "bare";
    case ControlMode::dephasing_protect: return "dephasing_protect";
    case ControlMode::full_protect: return "full_protect";
  }
  return "?";
}

ControlMode parse_control_mode(std::string_view name) {
  if (name == "bare") return ControlMode::bare;
  if (name == "dephasing_protect") return ControlMode::dephasing_protect;
  if (name == "full_protect") return ControlMode::full_protect;
  throw ValidationError("control.mode", "unknown mode '" + std::string(name) +
                                            "' (expected bare, dephasing_protect or full_protect)");
}

void ControlParams::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau", "gate time must be positive");
  if (mode == ControlMode::bare) return;
  if (n < 1) throw ValidationError("control.n", "winding n must be a positive integer");
  if (mode == ControlMode::full_protect) {
    if (m < 1) throw ValidationError("control.m", "winding m must be a positive integer for full_protect");
    if (m == n) throw ValidationError("control.m", "winding m must differ from n");
  }
}

int ControlParams::winding_bound() const {
  switch (mode) {
    case ControlMode::bare: return 1;
    case ControlMode::dephasing_protect: return 4 * n + 1;
    case ControlMode::full_protect: return 4 * std::max(n, m) + 1;
  }
  return 1;
}

std::string ControlParams::describe() const {
  std::ostringstream os;
  os << to_string(mode);
  if (mode != ControlMode::bare) os << " n=" << n;
  if (mode == ControlMode::full_protect) os << " m=" << m;
  return os.str();
}

QubitUnitary gate_unitary(double t, const ControlParams& p) {
  check_range(t, p);
  return QubitUnitary::trusted(gate_matrix(t / p.tau));
}

QubitUnitary decoupler_unitary(double t, const ControlParams& p) {
  check_range(t, p);
  return QubitUnitary::trusted(decoupler_matrix(t / p.tau, p));
}

QubitUnitary total_unitary(double t, const ControlParams& p) {
  check_range(t, p);
  return QubitUnitary::trusted(total_matrix(t / p.tau, p));
}

Mat2 total_unitary_derivative(double t, const ControlParams& p) {
  check_range(t, p);
  return total_matrix_dx(t / p.tau, p) / p.tau;
}

FieldVector control_field(double t, const ControlParams& p) {
  check_range(t, p);
  const double x = t / p.tau;
  const double unit = pi / p.tau;
  const double k = 1.0 / (2.0 * sqrt2);
  FieldVector f;
  switch (p.mode) {
    case ControlMode::bare:
      f.components = Vec3(k, 0.0, k) * unit;
      break;
    case ControlMode::dephasing_protect: {
      const double phase = 4.0 * p.n * pi * x;
      f.components = Vec3(2.0 * p.n + k, -k * std::sin(phase), k * std::cos(phase)) * unit;
      break;
    }
    case ControlMode::full_protect: {
      const double pn = 4.0 * p.n * pi * x;
      const double pm = 4.0 * p.m * pi * x;
      const double a = 2.0 * p.m + k;
      f.components = Vec3(2.0 * p.n + k * std::cos(pm),
                          -a * std::sin(pn) + k * std::cos(pn) * std::sin(pm),
                          a * std::cos(pn) + k * std::sin(pn) * std::sin(pm)) *
                     unit;
      break;
    }
  }
  return f;
}

UnitaryPath total_unitary_path(const ControlParams& p) {
  UnitaryPath path = total_unitary_path_numeric(p);
  path.derivative = [p](double t) { return Mat2(total_matrix_dx(t / p.tau, p) / p.tau); };
  return path;
}

UnitaryPath total_unitary_path_numeric(const ControlParams& p) {
  UnitaryPath path;
  path.unitary = [p](double t) { return QubitUnitary::trusted(total_matrix(t / p.tau, p)); };
  path.time_scale = p.tau;
  return path;
}

double gate_error(const ControlParams& p) {
  const Mat2 u = total_unitary(p.tau, p).matrix();
  const Mat2& h = hadamard_generator();
  const cplx overlap = (h.adjoint() * u).trace();
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0, 0.0);
  return (u - phase * h).norm();
}

bool verify_gate(const ControlParams& p) { return gate_error(p) <= 1e-10; }

}  // namespace decouple
