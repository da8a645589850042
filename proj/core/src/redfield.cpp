#include "decouple/redfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "decouple/errors.hpp"
#include "decouple/parallel.hpp"

namespace decouple {

namespace {

// Simpson pattern 1, 4, 2, 4, ..., indexed from the start of the interval.
double simpson_base(std::size_t l) { return l == 0 ? 1.0 : (l % 2 == 1 ? 4.0 : 2.0); }

void check_state(const Vec3& r, double t) {
  if (!r.allFinite()) {
    std::ostringstream os;
    os << "non-finite state at t = " << t;
    throw IntegrationError(os.str());
  }
}

}  // namespace

void OpenSystem::validate() const {
  control.validate();
  validate_reservoirs(reservoirs);
  thermal.validate();
}

int IntegratorConfig::minimum_steps(const ControlParams& control) { return 40 * control.winding_bound(); }

IntegratorConfig IntegratorConfig::defaults(const ControlParams& control) {
  IntegratorConfig cfg;
  cfg.steps = std::max(8000, minimum_steps(control));
  return cfg;
}

void IntegratorConfig::validate(const ControlParams& control) const {
  const int min_steps = minimum_steps(control);
  if (steps < min_steps) {
    throw ValidationError("integrator.steps", "need at least " + std::to_string(min_steps) + " steps for " +
                                                  control.describe() + ", got " + std::to_string(steps));
  }
  if (!(convergence_tol > 0.0)) throw ValidationError("integrator.tol", "tolerance must be positive");
}

std::vector<double> memory_quadrature_weights(std::size_t panels) {
  std::vector<double> w(panels + 1, 0.0);
  if (panels == 0) return w;
  if (panels == 1) {
    w[0] = w[1] = 0.5;
    return w;
  }
  const std::size_t simpson_end = panels % 2 == 0 ? panels : panels - 3;
  for (std::size_t l = 0; l <= simpson_end && simpson_end > 0; ++l) {
    w[l] = simpson_base(l) / 3.0;
  }
  if (simpson_end > 0) w[simpson_end] = 1.0 / 3.0;
  if (panels % 2 == 1) {
    const std::size_t s = panels - 3;
    w[s] += 3.0 / 8.0;
    w[s + 1] += 9.0 / 8.0;
    w[s + 2] += 9.0 / 8.0;
    w[s + 3] += 3.0 / 8.0;
  }
  return w;
}

std::vector<RotationMatrix3> rotation_table(const ControlParams& control, int steps) {
  const std::size_t nodes = 2 * static_cast<std::size_t>(steps) + 1;
  const double h = control.tau / (2.0 * steps);
  std::vector<RotationMatrix3> r(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double t = std::min(control.tau, h * static_cast<double>(j));
    r[j] = rotation_from_unitary(total_unitary(t, control));
  }
  return r;
}

DecoherenceTable::DecoherenceTable(int steps, double tau)
    : steps_(steps), tau_(tau), d_(2 * static_cast<std::size_t>(steps) + 1, Mat3c::Zero()) {
  if (steps < 1) throw ValidationError("integrator.steps", "need at least one step");
}

DecoherenceTable& DecoherenceTable::add_scaled(const DecoherenceTable& other, double factor) {
  if (other.steps_ != steps_ || other.tau_ != tau_) throw UsageError("decoherence tables live on different grids");
  for (std::size_t j = 0; j < d_.size(); ++j) d_[j] += factor * other.d_[j];
  return *this;
}

DecoherenceTable build_decoherence_table(const std::vector<RotationMatrix3>& rotations, const KernelTable& kernels,
                                         int steps, double tau, int threads) {
  DecoherenceTable table(steps, tau);
  const std::size_t nodes = table.size();
  const double h = table.spacing();
  if (rotations.size() != nodes) throw UsageError("rotation table does not match the integration grid");
  if (kernels.nodes() < nodes || std::abs(kernels.spacing() - h) > 1e-12 * h) {
    throw UsageError("kernel table must be tabulated on the half-step grid of the integration");
  }

  for (std::size_t r = 0; r < kernels.reservoirs().size(); ++r) {
    for (const CorrelationTerm& term : correlation_terms(kernels.reservoirs()[r])) {
      // Reversed kernel f(delta_{nodes-1-k}) so that f(t_j - t_l) is read
      // forwards in l; w_l = right^T R(t_l) carries the Simpson base weight.
      std::vector<double> f_re(nodes), f_im(nodes);
      for (std::size_t k = 0; k < nodes; ++k) {
        const cplx f = term.weight(kernels.at_node(r, nodes - 1 - k));
        f_re[k] = f.real();
        f_im[k] = f.imag();
      }
      std::array<std::vector<double>, 3> w_re, w_im, wb_re, wb_im;
      for (int c = 0; c < 3; ++c) {
        w_re[c].resize(nodes);
        w_im[c].resize(nodes);
        wb_re[c].resize(nodes);
        wb_im[c].resize(nodes);
      }
      for (std::size_t l = 0; l < nodes; ++l) {
        const Eigen::RowVector3cd w = term.right.transpose() * rotations[l].matrix().cast<cplx>();
        const double base = simpson_base(l);
        for (int c = 0; c < 3; ++c) {
          w_re[c][l] = w(c).real();
          w_im[c][l] = w(c).imag();
          wb_re[c][l] = base * w_re[c][l];
          wb_im[c][l] = base * w_im[c][l];
        }
      }

      parallel_for(nodes, threads, [&](std::size_t j) {
        if (j == 0) return;
        // u_l = f(t_j - t_l) w_l
        auto u = [&](std::size_t l, int c) {
          const double fr = f_re[nodes - 1 - j + l];
          const double fi = f_im[nodes - 1 - j + l];
          return cplx(fr * w_re[c][l] - fi * w_im[c][l], fr * w_im[c][l] + fi * w_re[c][l]);
        };
        std::array<cplx, 3> g{};
        if (j == 1) {
          for (int c = 0; c < 3; ++c) g[c] = 0.5 * h * (u(0, c) + u(1, c));
        } else {
          const std::size_t simpson_end = j % 2 == 0 ? j : j - 3;
          const double* fr = f_re.data() + (nodes - 1 - j);
          const double* fi = f_im.data() + (nodes - 1 - j);
          for (int c = 0; c < 3; ++c) {
            const double* wr = wb_re[c].data();
            const double* wi = wb_im[c].data();
            double acc_re = 0.0, acc_im = 0.0;
            for (std::size_t l = 0; l <= simpson_end; ++l) {
              acc_re += fr[l] * wr[l] - fi[l] * wi[l];
              acc_im += fr[l] * wi[l] + fi[l] * wr[l];
            }
            // Closing node of the Simpson block has weight 1, not the base 2
            // (or 0 instead of 1 when the block is empty).
            g[c] = h / 3.0 * (cplx(acc_re, acc_im) - u(simpson_end, c));
            if (j % 2 == 1) {
              const std::size_t s = j - 3;
              g[c] += 3.0 * h / 8.0 * (u(s, c) + 3.0 * u(s + 1, c) + 3.0 * u(s + 2, c) + u(s + 3, c));
            }
          }
        }
        const Vec3c a = rotations[j].matrix().transpose().cast<cplx>() * term.left;
        const Vec3c gv(g[0], g[1], g[2]);
        table.at(j) += a * gv.transpose();
      });
    }
  }
  return table;
}

DecoherenceTable build_decoherence_table(const OpenSystem& system, int steps, int threads) {
  system.validate();
  const auto rotations = rotation_table(system.control, steps);
  const KernelGrid grid = kernel_grid(system.reservoirs, system.control, 2 * static_cast<std::size_t>(steps));
  const KernelTable kernels = build_kernel_table(system.reservoirs, system.thermal, grid, threads);
  return build_decoherence_table(rotations, kernels, steps, system.control.tau, threads);
}

DecoherenceTensor decoherence_tensor(double t, const RotationProvider& rotation, const KernelTable& kernels,
                                     bool allow_interpolation) {
  if (!(t >= 0.0)) throw UsageError("decoherence tensor needs t >= 0");
  DecoherenceTensor out;
  if (t == 0.0) return out;

  const double ratio = t / kernels.spacing();
  const double nearest = std::round(ratio);
  const bool on_grid = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio);
  std::size_t panels;
  double h;
  if (on_grid) {
    panels = static_cast<std::size_t>(nearest);
    h = kernels.spacing();
  } else if (allow_interpolation) {
    panels = static_cast<std::size_t>(std::ceil(ratio));
    h = t / static_cast<double>(panels);
  } else {
    std::ostringstream os;
    os << "t = " << t << " is not on the kernel grid (spacing " << kernels.spacing() << ") and interpolation is off";
    throw UsageError(os.str());
  }
  if (on_grid && panels + 1 > kernels.nodes()) throw UsageError("t beyond the tabulated kernel extent");

  const std::vector<double> w = memory_quadrature_weights(panels);
  Mat3c integral = Mat3c::Zero();
  for (std::size_t l = 0; l <= panels; ++l) {
    const double tp = h * static_cast<double>(l);
    const Mat3c c = on_grid ? kernels.correlation_at_node(panels - l) : kernels.correlation(t - tp);
    integral += w[l] * c * rotation(tp).matrix().cast<cplx>();
  }
  out.entries = rotation(t).matrix().transpose().cast<cplx>() * integral * h;
  return out;
}

Mat2 master_rhs(const Mat2& rho, const DecoherenceTensor& d) {
  Mat2 out = Mat2::Zero();
  for (int a = 0; a < 3; ++a) {
    const Mat2& sa = pauli::sigma(a);
    for (int b = 0; b < 3; ++b) {
      const cplx dab = d.entries(a, b);
      if (dab == cplx(0.0, 0.0)) continue;
      const Mat2& sb = pauli::sigma(b);
      const Mat2 rho_sb = rho * sb;
      const Mat2 sb_rho = sb * rho;
      out += dab * (sa * rho_sb - rho_sb * sa) + std::conj(dab) * (sb_rho * sa - sa * sb_rho);
    }
  }
  return out;
}

Mat2 master_rhs(const QubitState& rho, const DecoherenceTensor& d) { return master_rhs(rho.matrix(), d); }

BlochGenerator BlochGenerator::from_tensor(const DecoherenceTensor& d) {
  BlochGenerator g;
  g.offset = 2.0 * pauli::components(master_rhs(Mat2(0.5 * Mat2::Identity()), d)).real();
  for (int j = 0; j < 3; ++j) {
    g.drift.col(j) = 2.0 * pauli::components(master_rhs(Mat2(0.5 * pauli::sigma(j)), d)).real();
  }
  return g;
}

GeneratorTable::GeneratorTable(const DecoherenceTable& table)
    : steps_(table.steps()), tau_(table.tau()), g_(table.size()) {
  for (std::size_t j = 0; j < table.size(); ++j) g_[j] = BlochGenerator::from_tensor(table.tensor(j));
}

namespace {

template <typename Visit>
Vec3 rk4(const Vec3& r0, const GeneratorTable& table, Visit&& visit) {
  const double h = table.tau() / table.steps();
  Vec3 r = r0;
  visit(0, r);
  for (int k = 0; k < table.steps(); ++k) {
    const std::size_t j = 2 * static_cast<std::size_t>(k);
    const Vec3 k1 = table.at(j).apply(r);
    const Vec3 k2 = table.at(j + 1).apply(r + 0.5 * h * k1);
    const Vec3 k3 = table.at(j + 1).apply(r + 0.5 * h * k2);
    const Vec3 k4 = table.at(j + 2).apply(r + h * k3);
    r += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    visit(k + 1, r);
  }
  return r;
}

}  // namespace

Endpoint propagate_endpoint(const Vec3& r0, const GeneratorTable& table) {
  Endpoint e;
  double max_norm = r0.norm();
  e.bloch = rk4(r0, table, [&](int, const Vec3& r) { max_norm = std::max(max_norm, r.norm()); });
  check_state(e.bloch, table.tau());
  e.min_eigenvalue = 0.5 * (1.0 - max_norm);
  return e;
}

Trajectory evolve(const QubitState& rho0, const GeneratorTable& table, const GeneratorTable* refined, double tol) {
  Trajectory traj;
  const std::size_t points = static_cast<std::size_t>(table.steps()) + 1;
  traj.times.reserve(points);
  traj.states.reserve(points);
  traj.fidelity.reserve(points);
  const double h = table.tau() / table.steps();
  rk4(rho0.bloch(), table, [&](int k, const Vec3& r) {
    const double t = h * k;
    check_state(r, t);
    QubitState state = QubitState::from_bloch(r);
    const Mat2& m = state.matrix();
    if (std::abs(m.trace() - cplx(1.0, 0.0)) > 1e-7 || (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-7) {
      throw IntegrationError("trace or Hermiticity drift beyond 1e-7 at t = " + std::to_string(t));
    }
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, state.min_eigenvalue());
    traj.times.push_back(t);
    traj.fidelity.push_back(overlap(state, rho0));
    traj.states.push_back(std::move(state));
  });

  if (refined) {
    const Endpoint e = propagate_endpoint(rho0.bloch(), *refined);
    const double f = overlap(QubitState::from_bloch(e.bloch), rho0);
    traj.refined_final_fidelity = f;
    traj.convergence_delta = std::abs(f - traj.final_fidelity());
    traj.converged = traj.convergence_delta <= tol;
  }
  return traj;
}

Trajectory evolve(const QubitState& rho0, const OpenSystem& system, const IntegratorConfig& cfg, int threads) {
  system.validate();
  cfg.validate(system.control);
  const GeneratorTable table(build_decoherence_table(system, cfg.steps, threads));
  if (!cfg.check_convergence) return evolve(rho0, table);
  const GeneratorTable refined(build_decoherence_table(system, 2 * cfg.steps, threads));
  return evolve(rho0, table, &refined, cfg.convergence_tol);
}

std::vector<std::pair<double, double>> fidelity_trace(const Trajectory& traj, const QubitState& rho0) {
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) out.emplace_back(traj.times[k], overlap(traj.states[k], rho0));
  return out;
}

std::vector<std::pair<double, double>> fidelity_derivative(const Trajectory& traj, const QubitState& rho0,
                                                           const DecoherenceTable& table) {
  if (traj.states.size() != static_cast<std::size_t>(table.steps()) + 1) {
    throw UsageError("trajectory and decoherence table use different grids");
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Mat2 drho = master_rhs(traj.states[k], table.tensor(2 * k));
    out.emplace_back(traj.times[k], (drho * rho0.matrix()).trace().real());
  }
  return out;
}

std::shared_ptr<const DecoherenceTable> DecoherenceCache::unit_table(const ControlParams& control,
                                                                     const ReservoirSpec& reservoir,
                                                                     const ThermalParams& thermal, int steps) {
  const Key key{static_cast<int>(control.mode), control.n, control.m, control.tau,
                static_cast<int>(reservoir.error_class), reservoir.s, reservoir.omega_c, thermal.beta_omega_c, steps};
  // Builds run under the lock: they are internally parallel and callers
  // asking for the same table must wait for it anyway.
  std::lock_guard lock(mutex_);
  if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  OpenSystem unit{control, {reservoir.unit_coupling()}, thermal};
  auto table = std::make_shared<const DecoherenceTable>(build_decoherence_table(unit, steps, threads_));
  tables_.emplace(key, table);
  return table;
}

DecoherenceTable DecoherenceCache::assemble(const OpenSystem& system, int steps) {
  system.validate();
  DecoherenceTable total(steps, system.control.tau);
  for (const ReservoirSpec& r : system.reservoirs) {
    if (r.eta == 0.0) continue;
    total.add_scaled(*unit_table(system.control, r, system.thermal, steps), r.eta);
  }
  return total;
}

std::size_t DecoherenceCache::size() const {
  std::lock_guard lock(mutex_);
  return tables_.size();
}

}  // namespace decouple
