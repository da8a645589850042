#pragma once

#include <cstddef>
#include <vector>

#include "decouple/bath.hpp"
#include "decouple/control.hpp"

namespace decouple {

/// Largest admissible table spacing: at least 40 nodes per kernel decay
/// period 2 pi / (omega_c s) and per fastest rotation period
/// tau / (4n + 4m + 1).
double max_kernel_spacing(const std::vector<ReservoirSpec>& reservoirs, const ControlParams& control);

/// Uniform delta grid {0, h, ..., intervals * h}.
struct KernelGrid {
  double spacing = 0.0;
  std::size_t intervals = 0;
  double max_spacing = 0.0;

  double extent() const { return spacing * static_cast<double>(intervals); }
};

/// Grid of `intervals` equal steps over [0, control.tau]. Throws
/// ValidationError when the spacing violates max_kernel_spacing.
KernelGrid kernel_grid(const std::vector<ReservoirSpec>& reservoirs, const ControlParams& control,
                       std::size_t intervals);

/// Write-once table of i1 / i2 per reservoir on a uniform delta grid, with
/// four-point (cubic) Lagrange interpolation between nodes. Negative deltas
/// use i(-delta) = conj(i(delta)).
class KernelTable {
 public:
  const std::vector<ReservoirSpec>& reservoirs() const { return reservoirs_; }
  const ThermalParams& thermal() const { return thermal_; }
  double spacing() const { return spacing_; }
  std::size_t nodes() const { return nodes_; }
  double extent() const { return spacing_ * static_cast<double>(nodes_ - 1); }

  const Autocorrelations& at_node(std::size_t reservoir, std::size_t node) const {
    return values_[reservoir][node];
  }
  /// Throws UsageError for |delta| beyond the tabulated extent.
  Autocorrelations interpolate(std::size_t reservoir, double delta) const;

  Mat3c correlation_at_node(std::size_t node) const;
  Mat3c correlation(double delta) const;

 private:
  friend KernelTable build_kernel_table(const std::vector<ReservoirSpec>&, const ThermalParams&, const KernelGrid&,
                                        int);
  std::vector<ReservoirSpec> reservoirs_;
  ThermalParams thermal_;
  double spacing_ = 0.0;
  std::size_t nodes_ = 0;
  std::vector<std::vector<Autocorrelations>> values_;
};

/// Tabulates bath_autocorrelations for every reservoir on the grid. Throws
/// ValidationError if grid.spacing > grid.max_spacing, ConfigError for
/// duplicate classes, and propagates ConvergenceError.
KernelTable build_kernel_table(const std::vector<ReservoirSpec>& reservoirs, const ThermalParams& thermal,
                               const KernelGrid& grid, int threads = 1);

}  // namespace decouple
