#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "decouple/bath.hpp"
#include "decouple/control.hpp"
#include "decouple/kernel_table.hpp"
#include "decouple/su2.hpp"

namespace decouple {

/// D_{alpha beta}(t) of the time-local master equation.
struct DecoherenceTensor {
  Mat3c entries = Mat3c::Zero();
};

/// Driven qubit plus its reservoirs: everything the generator depends on.
struct OpenSystem {
  ControlParams control;
  std::vector<ReservoirSpec> reservoirs;
  ThermalParams thermal;

  void validate() const;
};

struct IntegratorConfig {
  /// Uniform RK4 steps N on [0, tau].
  int steps = 8000;
  /// Allowed |F_N(tau) - F_2N(tau)|.
  double convergence_tol = 1e-4;
  bool check_convergence = true;

  /// 40 (4 max(n, m) + 1): 40 steps per fastest field period.
  static int minimum_steps(const ControlParams& control);
  /// max(8000, minimum_steps).
  static IntegratorConfig defaults(const ControlParams& control);
  void validate(const ControlParams& control) const;
};

/// Weights (in units of the spacing) of the composite rule used for memory
/// integrals over `panels` equal panels: trapezoid for one panel, Simpson
/// for an even count, Simpson plus a closing 3/8 block for odd counts >= 3.
std::vector<double> memory_quadrature_weights(std::size_t panels);

/// R(t) on the half-step grid t_j = j tau / (2 steps), j = 0 .. 2 steps.
std::vector<RotationMatrix3> rotation_table(const ControlParams& control, int steps);

/// D(t) on the half-step grid of an RK4 integration with `steps` steps.
class DecoherenceTable {
 public:
  DecoherenceTable(int steps, double tau);

  int steps() const { return steps_; }
  double tau() const { return tau_; }
  std::size_t size() const { return d_.size(); }
  double spacing() const { return tau_ / (2.0 * steps_); }
  double time(std::size_t j) const { return spacing() * static_cast<double>(j); }

  const Mat3c& at(std::size_t j) const { return d_[j]; }
  Mat3c& at(std::size_t j) { return d_[j]; }
  DecoherenceTensor tensor(std::size_t j) const { return {d_[j]}; }

  /// this += factor * other; both tables must share steps and tau.
  DecoherenceTable& add_scaled(const DecoherenceTable& other, double factor);

 private:
  int steps_;
  double tau_;
  std::vector<Mat3c> d_;
};

/// D(t_j) = R(t_j)^T int_0^{t_j} C(t_j - t') R(t') dt' for every half-step
/// node, with the composite rule of memory_quadrature_weights. `kernels`
/// must be tabulated on the same half-step grid; the correlation matrix is
/// applied through its rank-one terms.
DecoherenceTable build_decoherence_table(const std::vector<RotationMatrix3>& rotations, const KernelTable& kernels,
                                         int steps, double tau, int threads = 1);
DecoherenceTable build_decoherence_table(const OpenSystem& system, int steps, int threads = 1);

using RotationProvider = std::function<RotationMatrix3(double)>;

/// Pointwise D(t) from the full correlation matrix. The t' grid uses the
/// kernel table spacing; t must be a multiple of it unless
/// allow_interpolation is set, in which case the spacing shrinks to fit and
/// kernels are interpolated. Otherwise throws UsageError.
DecoherenceTensor decoherence_tensor(double t, const RotationProvider& rotation, const KernelTable& kernels,
                                     bool allow_interpolation = false);

/// sum D_ab [s_a, rho s_b] + conj(D_ab) [s_b rho, s_a].
Mat2 master_rhs(const Mat2& rho, const DecoherenceTensor& d);
Mat2 master_rhs(const QubitState& rho, const DecoherenceTensor& d);

/// The master equation as an affine flow on the Bloch vector,
/// dr/dt = drift r + offset, read off from master_rhs on the Pauli basis.
struct BlochGenerator {
  Mat3 drift = Mat3::Zero();
  Vec3 offset = Vec3::Zero();

  static BlochGenerator from_tensor(const DecoherenceTensor& d);
  Vec3 apply(const Vec3& r) const { return drift * r + offset; }
};

class GeneratorTable {
 public:
  explicit GeneratorTable(const DecoherenceTable& table);

  int steps() const { return steps_; }
  double tau() const { return tau_; }
  const BlochGenerator& at(std::size_t j) const { return g_[j]; }

 private:
  int steps_;
  double tau_;
  std::vector<BlochGenerator> g_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<QubitState> states;
  std::vector<double> fidelity;
  /// Smallest eigenvalue of rho over the trajectory (positivity monitor).
  double min_eigenvalue = 0.5;
  bool converged = true;
  std::optional<double> refined_final_fidelity;
  double convergence_delta = 0.0;

  double final_fidelity() const { return fidelity.back(); }
};

/// Fixed-step RK4 over the table. With `refined` (a 2N table) the endpoint
/// fidelity is recomputed and `converged` cleared when the two differ by
/// more than tol. Throws IntegrationError on a non-finite state.
Trajectory evolve(const QubitState& rho0, const GeneratorTable& table, const GeneratorTable* refined = nullptr,
                  double tol = 1e-4);
Trajectory evolve(const QubitState& rho0, const OpenSystem& system, const IntegratorConfig& cfg, int threads = 1);

struct Endpoint {
  Vec3 bloch;
  double min_eigenvalue = 0.5;
};
/// Final Bloch vector only; the sweep fast path of evolve().
Endpoint propagate_endpoint(const Vec3& r0, const GeneratorTable& table);

/// (t, F(t)) with F = Tr[rho(t) rho0].
std::vector<std::pair<double, double>> fidelity_trace(const Trajectory& traj, const QubitState& rho0);
/// (t, dF/dt) with dF/dt = Re Tr[master_rhs(rho(t), D(t)) rho0].
std::vector<std::pair<double, double>> fidelity_derivative(const Trajectory& traj, const QubitState& rho0,
                                                           const DecoherenceTable& table);

/// Shared read-only tables. D is linear in each coupling, so tables are
/// built once per (control, reservoir class, s, cutoff, temperature, steps)
/// at unit coupling and combined with the actual etas on demand.
class DecoherenceCache {
 public:
  explicit DecoherenceCache(int threads = 1) : threads_(threads) {}

  std::shared_ptr<const DecoherenceTable> unit_table(const ControlParams& control, const ReservoirSpec& reservoir,
                                                     const ThermalParams& thermal, int steps);
  DecoherenceTable assemble(const OpenSystem& system, int steps);
  std::size_t size() const;

 private:
  using Key = std::tuple<int, int, int, double, int, int, double, double, int>;
  int threads_;
  mutable std::mutex mutex_;
  std::map<Key, std::shared_ptr<const DecoherenceTable>> tables_;
};

}  // namespace decouple
