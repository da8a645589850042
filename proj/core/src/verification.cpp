#include "decouple/verification.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "decouple/redfield.hpp"

namespace decouple {

namespace {

using std::numbers::pi;
using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;

constexpr double kOmegaCTau = 2.0 * pi;

template <class F>
cplx integrate_complex(F f, double upper) {
  // Equal sub-intervals keep the adaptive rule from under-resolving the
  // oscillating factor on long ranges.
  constexpr int pieces = 32;
  cplx total{0.0, 0.0};
  for (int k = 0; k < pieces; ++k) {
    const double a = upper * k / pieces, b = upper * (k + 1) / pieces;
    const double re = Quad::integrate([&](double w) { return f(w).real(); }, a, b, 10, 1e-13);
    const double im = Quad::integrate([&](double w) { return f(w).imag(); }, a, b, 10, 1e-13);
    total += cplx(re, im);
  }
  return total;
}

/// Where w^s exp(-w / omega_c) has dropped below 1e-30 of its peak.
double cutoff_range(const ReservoirSpec& r) { return r.omega_c * (80.0 + 4.0 * r.s); }

std::string format(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult make(std::string name, double worst, double tol, std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.worst = worst;
  c.tolerance = tol;
  c.passed = std::isfinite(worst) && worst <= tol;
  c.detail = detail.empty() ? "worst " + format(worst) + " (tol " + format(tol) + ")" : std::move(detail);
  return c;
}

ReservoirSpec reservoir(ErrorClass c, double eta, int s) {
  ReservoirSpec r;
  r.error_class = c;
  r.eta = eta;
  r.s = s;
  r.omega_c = kOmegaCTau;
  return r;
}

ThermalParams default_thermal() { return ThermalParams::from_physical(0.25, 1e-10, kOmegaCTau); }

double hermiticity_defect(const Mat2& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

cplx quadrature_vacuum_kernel(double delta, const ReservoirSpec& r) {
  return integrate_complex(
      [&](double w) { return spectral_density(w, r) * std::exp(cplx(0.0, -w * delta)); }, cutoff_range(r));
}

cplx quadrature_thermal_kernel(double delta, const ReservoirSpec& r, const ThermalParams& th) {
  const double beta = th.beta_omega_c / r.omega_c;
  return integrate_complex(
      [&](double w) {
        if (w <= 0.0) return cplx(0.0, 0.0);
        return spectral_density(w, r) * thermal_occupation(w, beta) * std::exp(cplx(0.0, -w * delta));
      },
      cutoff_range(r));
}

std::vector<CheckResult> kernel_oracle_checks() {
  const std::vector<std::pair<double, int>> probes = {{0.0, 1},  {0.02, 1}, {0.1, 1}, {0.5, 1},  {1.0, 1},
                                                      {0.05, 2}, {0.2, 3},  {0.7, 3}, {0.1, 5}, {0.1, 12}};
  const ThermalParams th = default_thermal();
  std::vector<CheckResult> out;
  for (auto [delta, s] : probes) {
    const ReservoirSpec r = reservoir(ErrorClass::dephasing, 1.0 / 16.0, s);
    const cplx vac = kernel_vacuum(delta, r), vac_q = quadrature_vacuum_kernel(delta, r);
    const cplx therm = kernel_thermal(delta, r, th), therm_q = quadrature_thermal_kernel(delta, r, th);
    const double err = std::max(std::abs(vac - vac_q) / std::abs(vac_q), std::abs(therm - therm_q) / std::abs(therm_q));
    std::ostringstream name;
    name << "kernel closed form vs quadrature (delta=" << delta << ", s=" << s << ")";
    out.push_back(make(name.str(), err, 1e-8));
  }
  return out;
}

std::vector<ControlParams> experiment_controls() {
  return {ControlParams::bare(),         ControlParams::dephasing(2),  ControlParams::dephasing(3),
          ControlParams::dephasing(5),   ControlParams::dephasing(15), ControlParams::dephasing(25),
          ControlParams::full(25, 10)};
}

std::vector<CheckResult> field_synthesis_checks(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  for (const ControlParams& p : experiment_controls()) {
    std::uniform_real_distribution<double> dist(0.0, p.tau);
    const UnitaryPath numeric = total_unitary_path_numeric(p);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double t = dist(rng);
      const Vec3 exact = control_field(t, p).components;
      const Vec3 fd = field_from_path(numeric, t).components;
      worst = std::max(worst, (exact - fd).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff());
    }
    out.push_back(make("control field vs finite-difference i dU/dt U^dag (" + p.describe() + ")", worst, 1e-6));
  }
  return out;
}

double decoupling_integral_residual(const ControlParams& p, int pauli, double t_c, int panels) {
  if (panels % 2 != 0) ++panels;
  const double h = t_c / panels;
  Mat2 sum = Mat2::Zero();
  for (int k = 0; k <= panels; ++k) {
    const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    const Mat2 u = decoupler_unitary(std::min(k * h, p.tau), p).matrix();
    sum += w * (u.adjoint() * pauli::sigma(pauli) * u);
  }
  return (sum * (h / 3.0)).cwiseAbs().maxCoeff();
}

std::vector<CheckResult> invariant_checks() {
  std::vector<CheckResult> out;
  const ThermalParams th = default_thermal();
  const std::vector<ControlParams> controls = experiment_controls();

  // Trace and Hermiticity along trajectories with every bath class present.
  {
    double trace_worst = 0.0, herm_worst = 0.0;
    const std::vector<ReservoirSpec> baths = {reservoir(ErrorClass::bit_flip, 0.2 / 16.0, 1),
                                              reservoir(ErrorClass::dissipation, 0.2 / 16.0, 3),
                                              reservoir(ErrorClass::dephasing, 1.0 / 16.0, 1)};
    for (const ControlParams& p : {ControlParams::bare(), ControlParams::dephasing(5), ControlParams::full(25, 10)}) {
      const OpenSystem sys{p, baths, th};
      IntegratorConfig cfg;
      cfg.steps = std::max(600, IntegratorConfig::minimum_steps(p));
      cfg.check_convergence = false;
      const Trajectory tr = evolve(density_from_bloch(1.1, 0.4), sys, cfg);
      for (const QubitState& s : tr.states) {
        trace_worst = std::max(trace_worst, std::abs(s.matrix().trace() - 1.0));
        herm_worst = std::max(herm_worst, hermiticity_defect(s.matrix()));
      }
    }
    out.push_back(make("trajectory trace preservation", trace_worst, 1e-9));
    out.push_back(make("trajectory Hermiticity", herm_worst, 1e-9));
  }

  // The master-equation right-hand side for arbitrary D and rho.
  {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      DecoherenceTensor d;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) d.entries(a, b) = cplx(g(rng), g(rng));
      }
      const Vec3 r = Vec3(g(rng), g(rng), g(rng)).normalized() * std::uniform_real_distribution<double>(0, 1)(rng);
      const Mat2 rhs = master_rhs(QubitState::from_bloch(r), d);
      const double scale = d.entries.cwiseAbs().maxCoeff();
      worst = std::max({worst, hermiticity_defect(rhs) / scale, std::abs(rhs.trace()) / scale});
    }
    out.push_back(make("master equation output traceless and Hermitian", worst, 1e-12));
  }

  // No coupling, no decoherence.
  {
    double worst = 0.0;
    for (const ControlParams& p : controls) {
      const OpenSystem sys{p,
                           {reservoir(ErrorClass::bit_flip, 0.0, 1), reservoir(ErrorClass::dissipation, 0.0, 3),
                            reservoir(ErrorClass::dephasing, 0.0, 1)},
                           th};
      IntegratorConfig cfg;
      cfg.steps = std::max(600, IntegratorConfig::minimum_steps(p));
      cfg.check_convergence = false;
      const Trajectory tr = evolve(density_from_bloch(0.8, 2.0), sys, cfg);
      for (double f : tr.fidelity) worst = std::max(worst, std::abs(f - 1.0));
    }
    out.push_back(make("zero coupling keeps F = 1", worst, 1e-12));
  }

  // Rotation matrices along every control path.
  {
    double worst = 0.0;
    for (const ControlParams& p : controls) {
      for (const RotationMatrix3& r : rotation_table(p, 1000)) {
        worst = std::max({worst, (r.matrix().transpose() * r.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff(),
                          std::abs(r.matrix().determinant() - 1.0)});
      }
    }
    out.push_back(make("rotation orthogonality", worst, 1e-12));
  }

  // Decouplers average the protected error operators away: sigma_z over one
  // x-winding period for the dephasing field, all three Paulis over the
  // gate for the full field.
  {
    double worst = 0.0;
    for (const ControlParams& p : controls) {
      if (p.mode == ControlMode::dephasing_protect) {
        worst = std::max(worst, decoupling_integral_residual(p, 2, p.tau / p.n));
      } else if (p.mode == ControlMode::full_protect) {
        for (int k = 0; k < 3; ++k) worst = std::max(worst, decoupling_integral_residual(p, k, p.tau));
      }
    }
    out.push_back(make("decoupling condition integral", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (const ControlParams& p : controls) worst = std::max(worst, gate_error(p));
    out.push_back(make("gate closure (Hadamard up to phase)", worst, 1e-10));
  }
  return out;
}

}  // namespace decouple
