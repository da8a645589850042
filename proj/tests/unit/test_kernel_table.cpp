#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "decouple/errors.hpp"
#include "decouple/kernel_table.hpp"

using namespace decouple;
using std::numbers::pi;

namespace {

ReservoirSpec bath(ErrorClass c, int s, double eta = 1.0 / 16.0) {
  ReservoirSpec r;
  r.error_class = c;
  r.eta = eta;
  r.s = s;
  r.omega_c = 2.0 * pi;
  return r;
}

ThermalParams default_thermal() { return ThermalParams::from_physical(0.25, 1e-10, 2.0 * pi); }

}  // namespace

TEST(KernelGrid, SpacingRule) {
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::dephasing, 3)};
  EXPECT_NEAR(max_kernel_spacing(rs, ControlParams::bare()), 1.0 / 120.0, 1e-15);
  EXPECT_NEAR(max_kernel_spacing(rs, ControlParams::full(25, 10)), 1.0 / (40.0 * 141.0), 1e-15);
  EXPECT_NEAR(max_kernel_spacing({}, ControlParams::dephasing(5)), 1.0 / (40.0 * 21.0), 1e-15);
  EXPECT_THROW(kernel_grid(rs, ControlParams::bare(), 100), ValidationError);
  EXPECT_NO_THROW(kernel_grid(rs, ControlParams::bare(), 120));
  EXPECT_THROW(kernel_grid(rs, ControlParams::bare(), 0), ValidationError);
}

TEST(KernelTable, NodesEqualPointwiseEvaluation) {
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::bit_flip, 1, 0.01), bath(ErrorClass::dephasing, 3)};
  const ThermalParams th = default_thermal();
  const KernelTable t = build_kernel_table(rs, th, kernel_grid(rs, ControlParams::bare(), 400), 2);
  ASSERT_EQ(t.nodes(), 401u);
  EXPECT_DOUBLE_EQ(t.extent(), 1.0);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t k = 0; k < t.nodes(); k += 37) {
      const Autocorrelations direct = bath_autocorrelations(t.spacing() * k, rs[i], th);
      EXPECT_EQ(t.at_node(i, k).i1, direct.i1);
      EXPECT_EQ(t.at_node(i, k).i2, direct.i2);
      const Autocorrelations via = t.interpolate(i, t.spacing() * k);
      EXPECT_LT(std::abs(via.i1 - direct.i1), 1e-13 * std::abs(direct.i1));
      EXPECT_LT(std::abs(via.i2 - direct.i2), 1e-13 * std::abs(direct.i2));
    }
  }
}

TEST(KernelTable, CubicInterpolationOffGrid) {
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::dissipation, 1, 0.01), bath(ErrorClass::dephasing, 3)};
  const ThermalParams th = default_thermal();
  const KernelTable t = build_kernel_table(rs, th, kernel_grid(rs, ControlParams::dephasing(25), 16000));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double delta = d(rng);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const Autocorrelations a = t.interpolate(i, delta);
      const Autocorrelations b = bath_autocorrelations(delta, rs[i], th);
      worst = std::max({worst, std::abs(a.i1 - b.i1) / std::abs(b.i1), std::abs(a.i2 - b.i2) / std::abs(b.i2)});
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(KernelTable, NegativeDelayIsConjugate) {
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::dephasing, 1)};
  const KernelTable t = build_kernel_table(rs, default_thermal(), kernel_grid(rs, ControlParams::bare(), 400));
  const Autocorrelations plus = t.interpolate(0, 0.3141);
  const Autocorrelations minus = t.interpolate(0, -0.3141);
  EXPECT_EQ(minus.i1, std::conj(plus.i1));
  EXPECT_EQ(minus.i2, std::conj(plus.i2));
  EXPECT_LT((t.correlation(-0.3141) - t.correlation(0.3141).adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(KernelTable, BeyondExtentIsUsageError) {
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::dephasing, 1)};
  const KernelTable t = build_kernel_table(rs, default_thermal(), kernel_grid(rs, ControlParams::bare(), 400));
  EXPECT_THROW(t.interpolate(0, 1.01), UsageError);
  EXPECT_THROW(t.correlation(-1.5), UsageError);
}

TEST(KernelTable, CorrelationMatchesDirectMatrix) {
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::bit_flip, 1, 0.01), bath(ErrorClass::dissipation, 3, 0.01),
                                         bath(ErrorClass::dephasing, 1)};
  const ThermalParams th = default_thermal();
  const KernelTable t = build_kernel_table(rs, th, kernel_grid(rs, ControlParams::bare(), 800));
  for (std::size_t k = 0; k < t.nodes(); k += 61) {
    const Mat3c direct = correlation_matrix(t.spacing() * k, rs, th);
    EXPECT_LT((t.correlation_at_node(k) - direct).cwiseAbs().maxCoeff(), 1e-13 * direct.cwiseAbs().maxCoeff());
  }
}

TEST(KernelTable, NoReservoirsMeansNoCorrelation) {
  const KernelTable t = build_kernel_table({}, default_thermal(), kernel_grid({}, ControlParams::bare(), 100));
  EXPECT_EQ(t.correlation_at_node(3), Mat3c::Zero());
  EXPECT_EQ(t.correlation(0.55), Mat3c::Zero());
}

TEST(KernelTable, ThreadCountDoesNotChangeValues) {
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::dephasing, 3)};
  const ThermalParams th = default_thermal();
  const KernelGrid g = kernel_grid(rs, ControlParams::bare(), 600);
  const KernelTable a = build_kernel_table(rs, th, g, 1);
  const KernelTable b = build_kernel_table(rs, th, g, 4);
  for (std::size_t k = 0; k < a.nodes(); ++k) {
    EXPECT_EQ(a.at_node(0, k).i1, b.at_node(0, k).i1);
    EXPECT_EQ(a.at_node(0, k).i2, b.at_node(0, k).i2);
  }
}
