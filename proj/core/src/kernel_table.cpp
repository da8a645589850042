#include "decouple/kernel_table.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "decouple/errors.hpp"
#include "decouple/parallel.hpp"

namespace decouple {

double max_kernel_spacing(const std::vector<ReservoirSpec>& reservoirs, const ControlParams& control) {
  double h = control.tau / (40.0 * (4.0 * control.n + 4.0 * control.m + 1.0));
  for (const auto& r : reservoirs) h = std::min(h, 2.0 * std::numbers::pi / (40.0 * r.omega_c * r.s));
  return h;
}

KernelGrid kernel_grid(const std::vector<ReservoirSpec>& reservoirs, const ControlParams& control,
                       std::size_t intervals) {
  if (intervals == 0) throw ValidationError("grid.intervals", "need at least one interval");
  KernelGrid g;
  g.spacing = control.tau / static_cast<double>(intervals);
  g.intervals = intervals;
  g.max_spacing = max_kernel_spacing(reservoirs, control);
  if (g.spacing > g.max_spacing * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "spacing " << g.spacing << " exceeds the resolution limit " << g.max_spacing;
    throw ValidationError("grid.intervals", os.str());
  }
  return g;
}

Autocorrelations KernelTable::interpolate(std::size_t reservoir, double delta) const {
  if (delta < 0.0) {
    const Autocorrelations a = interpolate(reservoir, -delta);
    return {std::conj(a.i1), std::conj(a.i2)};
  }
  const double u = delta / spacing_;
  const double last = static_cast<double>(nodes_ - 1);
  if (u > last * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "delta " << delta << " beyond the tabulated extent " << extent();
    throw UsageError(os.str());
  }
  const auto& v = values_[reservoir];
  if (nodes_ < 4) {
    // Too few nodes for a cubic stencil; linear fallback.
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(u), nodes_ - 2);
    const double f = u - static_cast<double>(i);
    return {(1 - f) * v[i].i1 + f * v[i + 1].i1, (1 - f) * v[i].i2 + f * v[i + 1].i2};
  }
  const auto cell = static_cast<long>(std::floor(u));
  const long first = std::clamp(cell - 1, 0L, static_cast<long>(nodes_) - 4);
  const double x = u - static_cast<double>(first);
  // Lagrange basis on nodes 0, 1, 2, 3 evaluated at x.
  const double w0 = -(x - 1) * (x - 2) * (x - 3) / 6.0;
  const double w1 = x * (x - 2) * (x - 3) / 2.0;
  const double w2 = -x * (x - 1) * (x - 3) / 2.0;
  const double w3 = x * (x - 1) * (x - 2) / 6.0;
  const auto* p = &v[static_cast<std::size_t>(first)];
  return {w0 * p[0].i1 + w1 * p[1].i1 + w2 * p[2].i1 + w3 * p[3].i1,
          w0 * p[0].i2 + w1 * p[1].i2 + w2 * p[2].i2 + w3 * p[3].i2};
}

Mat3c KernelTable::correlation_at_node(std::size_t node) const {
  std::vector<Autocorrelations> k;
  k.reserve(reservoirs_.size());
  for (std::size_t r = 0; r < reservoirs_.size(); ++r) k.push_back(values_[r][node]);
  return correlation_matrix(k, reservoirs_);
}

Mat3c KernelTable::correlation(double delta) const {
  std::vector<Autocorrelations> k;
  k.reserve(reservoirs_.size());
  for (std::size_t r = 0; r < reservoirs_.size(); ++r) k.push_back(interpolate(r, delta));
  return correlation_matrix(k, reservoirs_);
}

KernelTable build_kernel_table(const std::vector<ReservoirSpec>& reservoirs, const ThermalParams& thermal,
                               const KernelGrid& grid, int threads) {
  validate_reservoirs(reservoirs);
  thermal.validate();
  if (grid.intervals == 0 || !(grid.spacing > 0.0)) throw ValidationError("grid", "empty kernel grid");
  if (grid.spacing > grid.max_spacing * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "kernel grid spacing " << grid.spacing << " exceeds the resolution limit " << grid.max_spacing;
    throw ValidationError("grid.spacing", os.str());
  }

  KernelTable t;
  t.reservoirs_ = reservoirs;
  t.thermal_ = thermal;
  t.spacing_ = grid.spacing;
  t.nodes_ = grid.intervals + 1;
  t.values_.assign(reservoirs.size(), std::vector<Autocorrelations>(t.nodes_));
  for (std::size_t r = 0; r < reservoirs.size(); ++r) {
    auto& column = t.values_[r];
    parallel_for(t.nodes_, threads, [&](std::size_t i) {
      column[i] = bath_autocorrelations(grid.spacing * static_cast<double>(i), reservoirs[r], thermal);
    });
  }
  return t;
}

}  // namespace decouple
