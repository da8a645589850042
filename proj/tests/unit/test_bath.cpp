#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "decouple/bath.hpp"
#include "decouple/errors.hpp"
#include "decouple/verification.hpp"

using namespace decouple;
using std::numbers::pi;

namespace {

constexpr double kOmegaC = 2.0 * pi;

ReservoirSpec bath(ErrorClass c, int s, double eta = 1.0 / 16.0) {
  ReservoirSpec r;
  r.error_class = c;
  r.eta = eta;
  r.s = s;
  r.omega_c = kOmegaC;
  return r;
}

ThermalParams default_thermal() { return ThermalParams::from_physical(0.25, 1e-10, kOmegaC); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

/// Truncated single-mode oscillator: Tr[X_mu(t) rho_B X_nu(t')] with
/// X_mu(t) = lambda_mu a e^{-i w t} + conj(lambda_mu) a^dag e^{i w t}.
Mat3c oscillator_correlation(const Vec3c& lambda, double w, double beta, double t, double tp) {
  constexpr int dim = 60;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  double z = 0.0;
  for (int k = 0; k < dim; ++k) z += std::exp(-beta * w * k);
  for (int k = 0; k < dim; ++k) rho(k, k) = std::exp(-beta * w * k) / z;
  const cplx i{0.0, 1.0};
  auto x = [&](int mu, double time) -> Eigen::MatrixXcd {
    return lambda(mu) * std::exp(-i * w * time) * a + std::conj(lambda(mu)) * std::exp(i * w * time) * a.adjoint();
  };
  Mat3c c;
  for (int mu = 0; mu < 3; ++mu) {
    for (int nu = 0; nu < 3; ++nu) c(mu, nu) = (x(mu, t) * rho * x(nu, tp)).trace();
  }
  return c;
}

}  // namespace

TEST(ReservoirSpec, ErrorVectors) {
  const cplx i{0.0, 1.0};
  EXPECT_EQ(bath(ErrorClass::bit_flip, 1).lambda(), Vec3c(1, 0, 0));
  EXPECT_EQ(bath(ErrorClass::dissipation, 1).lambda(), Vec3c(0.5, 0.5 * i, 0));
  EXPECT_EQ(bath(ErrorClass::dephasing, 1).lambda(), Vec3c(0, 0, 1));
}

TEST(ReservoirSpec, Validation) {
  EXPECT_THROW(bath(ErrorClass::dephasing, 0).validate(), ValidationError);
  EXPECT_THROW(bath(ErrorClass::dephasing, 1, -0.1).validate(), ValidationError);
  EXPECT_NO_THROW(bath(ErrorClass::dephasing, 1, 0.0).validate());
  EXPECT_THROW(validate_reservoirs({bath(ErrorClass::dephasing, 1), bath(ErrorClass::dephasing, 3)}), ConfigError);
  EXPECT_THROW(parse_error_class("amplitude"), ValidationError);
  for (ErrorClass c : {ErrorClass::bit_flip, ErrorClass::dissipation, ErrorClass::dephasing}) {
    EXPECT_EQ(parse_error_class(to_string(c)), c);
  }
}

TEST(ThermalParams, DerivedFromPhysicalInputs) {
  const ThermalParams th = default_thermal();
  EXPECT_NEAR(th.beta_omega_c, 1.9196972281702531, 1e-12);
  EXPECT_NEAR(th.beta_omega_c, 1.9197, 1e-4);
  ThermalParams bad;
  bad.beta_omega_c = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(SpectralDensity, Examples) {
  const ReservoirSpec r = bath(ErrorClass::dephasing, 1);
  EXPECT_EQ(spectral_density(0.0, r), 0.0);
  EXPECT_NEAR(spectral_density(kOmegaC, r), kOmegaC / 16.0 * std::exp(-1.0), 1e-15);
  EXPECT_THROW(spectral_density(-1.0, r), DomainError);
}

TEST(SpectralDensity, PeaksAtSTimesCutoff) {
  for (int s : {1, 2, 3, 5}) {
    const ReservoirSpec r = bath(ErrorClass::dephasing, s);
    double best = 0.0, arg = 0.0;
    for (int k = 1; k <= 200000; ++k) {
      const double w = k * 1e-4 * kOmegaC;
      const double j = spectral_density(w, r);
      if (j > best) best = j, arg = w;
    }
    EXPECT_NEAR(arg, s * kOmegaC, 2e-4 * kOmegaC) << "s=" << s;
  }
}

TEST(ThermalOccupation, Examples) {
  EXPECT_NEAR(thermal_occupation(std::log(2.0), 1.0), 1.0, 1e-15);
  EXPECT_LT(thermal_occupation(50.0, 1.0), 2e-22);
  EXPECT_NEAR(thermal_occupation(1.0, 1.0), 1.0 / (std::exp(1.0) - 1.0), 1e-15);
  EXPECT_NEAR(thermal_occupation(1.0, 1.0), 0.5819767068693265, 1e-15);
  EXPECT_THROW(thermal_occupation(0.0, 1.0), DomainError);
  EXPECT_THROW(thermal_occupation(1.0, 0.0), DomainError);
}

TEST(VacuumKernel, ZeroDelay) {
  EXPECT_NEAR(std::abs(kernel_vacuum(0.0, bath(ErrorClass::dephasing, 1)) - kOmegaC * kOmegaC / 16.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(kernel_vacuum(0.0, bath(ErrorClass::dephasing, 3)) - 6.0 / 16.0 * kOmegaC * kOmegaC), 0.0, 1e-12);
}

TEST(VacuumKernel, MatchesQuadrature) {
  const ReservoirSpec r = bath(ErrorClass::dephasing, 1);
  const double delta = 3.0 / kOmegaC;
  EXPECT_LT(rel(kernel_vacuum(delta, r), quadrature_vacuum_kernel(delta, r)), 1e-10);
}

TEST(VacuumKernel, MonotoneDecayInDelay) {
  for (int s : {1, 3}) {
    const ReservoirSpec r = bath(ErrorClass::dephasing, s);
    double prev = std::abs(kernel_vacuum(0.0, r));
    for (int k = 1; k <= 1000; ++k) {
      const double now = std::abs(kernel_vacuum(k * 1e-3, r));
      EXPECT_LT(now, prev);
      EXPECT_NEAR(now, std::abs(kernel_vacuum(-k * 1e-3, r)), 1e-15 * prev);
      prev = now;
    }
  }
}

TEST(ThermalKernel, ZeroTemperatureLimit) {
  // For beta omega_c >> 1 the thermal part shrinks like zeta(s+1) / (beta omega_c)^(s+1).
  ThermalParams cold;
  cold.beta_omega_c = 1e6;
  const ReservoirSpec r = bath(ErrorClass::dephasing, 1);
  const double scale = r.eta * kOmegaC * kOmegaC;
  const double leading = scale * std::numbers::pi * std::numbers::pi / 6.0 * 1e-12;
  EXPECT_NEAR(std::abs(kernel_thermal(0.3, r, cold)), leading, 1e-5 * leading);
  const Autocorrelations a = bath_autocorrelations(0.3, r, cold);
  EXPECT_LT(std::abs(a.i1), 1e-11 * scale);
  EXPECT_LT(std::abs(a.i2 - std::conj(kernel_vacuum(0.3, r))), 1e-11 * scale);
}

TEST(ThermalKernel, RealPositiveAtZeroDelay) {
  const cplx v = kernel_thermal(0.0, bath(ErrorClass::dephasing, 3), default_thermal());
  EXPECT_GT(v.real(), 0.0);
  EXPECT_EQ(v.imag(), 0.0);
}

TEST(ThermalKernel, MatchesQuadratureWithBoseFactor) {
  const ReservoirSpec r = bath(ErrorClass::dephasing, 1);
  const ThermalParams th = default_thermal();
  EXPECT_LT(rel(kernel_thermal(0.4, r, th), quadrature_thermal_kernel(0.4, r, th)), 1e-8);
}

TEST(ThermalKernel, TailBoundReported) {
  for (int s : {1, 3, 12}) {
    const ThermalSum sum = kernel_thermal_sum(0.2, bath(ErrorClass::dephasing, s), default_thermal());
    EXPECT_LE(sum.relative_tail_bound, 1e-12);
    EXPECT_GT(sum.terms, 0);
  }
}

TEST(Autocorrelations, ClosedFormsMatchQuadratureOnGrid) {
  const ThermalParams th = default_thermal();
  for (int s : {1, 3}) {
    const ReservoirSpec r = bath(ErrorClass::dephasing, s);
    for (double delta : {0.0, 0.01, 0.1, 0.5, 1.0}) {
      const Autocorrelations a = bath_autocorrelations(delta, r, th);
      // I1: int J n e^{-i w delta}; I2: int J (n + 1) e^{+i w delta}, integrated directly.
      const cplx i1 = quadrature_thermal_kernel(delta, r, th);
      const cplx i2 = quadrature_thermal_kernel(-delta, r, th) + quadrature_vacuum_kernel(-delta, r);
      EXPECT_LT(rel(a.i1, i1), 1e-8) << "s=" << s << " delta=" << delta;
      EXPECT_LT(rel(a.i2, i2), 1e-8) << "s=" << s << " delta=" << delta;
    }
  }
}

TEST(Autocorrelations, ZeroDelayDifferenceIsVacuum) {
  const ReservoirSpec r = bath(ErrorClass::dephasing, 3);
  const Autocorrelations a = bath_autocorrelations(0.0, r, default_thermal());
  EXPECT_NEAR(std::abs(a.i2 - a.i1 - r.eta * kOmegaC * kOmegaC * 6.0), 0.0, 1e-12);
  EXPECT_EQ(a.i1.imag(), 0.0);
  EXPECT_EQ(a.i2.imag(), 0.0);
  EXPECT_GT(a.i2.real(), a.i1.real());
  EXPECT_GT(a.i1.real(), 0.0);
}

TEST(CorrelationMatrix, DephasingOnly) {
  const ThermalParams th = default_thermal();
  const ReservoirSpec r = bath(ErrorClass::dephasing, 1);
  const Autocorrelations a = bath_autocorrelations(0.2, r, th);
  const Mat3c c = correlation_matrix(0.2, {r}, th);
  Mat3c expected = Mat3c::Zero();
  expected(2, 2) = a.i1 + a.i2;
  EXPECT_LT((c - expected).cwiseAbs().maxCoeff(), 1e-14 * std::abs(expected(2, 2)));
}

TEST(CorrelationMatrix, BitFlipOnly) {
  const ThermalParams th = default_thermal();
  const ReservoirSpec r = bath(ErrorClass::bit_flip, 3);
  const Autocorrelations a = bath_autocorrelations(0.2, r, th);
  const Mat3c c = correlation_matrix(0.2, {r}, th);
  Mat3c expected = Mat3c::Zero();
  expected(0, 0) = a.i1 + a.i2;
  EXPECT_LT((c - expected).cwiseAbs().maxCoeff(), 1e-14 * std::abs(expected(0, 0)));
}

TEST(CorrelationMatrix, DissipationOnly) {
  const ThermalParams th = default_thermal();
  const ReservoirSpec r = bath(ErrorClass::dissipation, 1);
  const Autocorrelations a = bath_autocorrelations(0.2, r, th);
  const Mat3c c = correlation_matrix(0.2, {r}, th);
  const cplx i{0.0, 1.0};
  Mat3c expected = Mat3c::Zero();
  expected(0, 0) = expected(1, 1) = (a.i1 + a.i2) / 4.0;
  expected(0, 1) = i / 4.0 * (a.i2 - a.i1);
  expected(1, 0) = -expected(0, 1);
  EXPECT_LT((c - expected).cwiseAbs().maxCoeff(), 1e-14 * std::abs(expected(0, 0)));
}

TEST(CorrelationMatrix, MatchesTruncatedOscillator) {
  // One bath mode of frequency w: i1 = n e^{-i w delta}, i2 = (n + 1) e^{i w delta}.
  const double w = 1.3, beta = 2.0, t = 0.9, tp = 0.25;
  const double n = 1.0 / std::expm1(beta * w);
  const cplx i{0.0, 1.0};
  const Autocorrelations single{n * std::exp(-i * w * (t - tp)), (n + 1.0) * std::exp(i * w * (t - tp))};
  for (ErrorClass cls : {ErrorClass::bit_flip, ErrorClass::dissipation, ErrorClass::dephasing}) {
    const ReservoirSpec r = bath(cls, 1);
    const Mat3c model = correlation_matrix(std::vector<Autocorrelations>{single}, {r});
    const Mat3c oracle = oscillator_correlation(r.lambda(), w, beta, t, tp);
    EXPECT_LT((model - oracle).cwiseAbs().maxCoeff(), 1e-12) << to_string(cls);
  }
}

TEST(CorrelationMatrix, HermitianStationarity) {
  const ThermalParams th = default_thermal();
  const std::vector<ReservoirSpec> rs = {bath(ErrorClass::bit_flip, 1, 0.01), bath(ErrorClass::dissipation, 3, 0.02),
                                         bath(ErrorClass::dephasing, 1)};
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double delta = d(rng);
    const Mat3c plus = correlation_matrix(delta, rs, th);
    const Mat3c minus = correlation_matrix(-delta, rs, th);
    EXPECT_LT((plus - minus.adjoint()).cwiseAbs().maxCoeff(), 1e-10 * plus.cwiseAbs().maxCoeff());
  }
}

TEST(CorrelationMatrix, RankOneTermsReassemble) {
  const ThermalParams th = default_thermal();
  for (ErrorClass cls : {ErrorClass::bit_flip, ErrorClass::dissipation, ErrorClass::dephasing}) {
    const ReservoirSpec r = bath(cls, 3);
    const Autocorrelations a = bath_autocorrelations(0.37, r, th);
    Mat3c sum = Mat3c::Zero();
    for (const CorrelationTerm& term : correlation_terms(r)) sum += term.left * term.right.transpose() * term.weight(a);
    const Mat3c direct = correlation_matrix(std::vector<Autocorrelations>{a}, {r});
    EXPECT_LT((sum - direct).cwiseAbs().maxCoeff(), 1e-14 * direct.cwiseAbs().maxCoeff()) << to_string(cls);
  }
  EXPECT_EQ(correlation_terms(bath(ErrorClass::dephasing, 1)).size(), 1u);
  EXPECT_EQ(correlation_terms(bath(ErrorClass::dissipation, 1)).size(), 2u);
}

TEST(CorrelationMatrix, RejectsDuplicateClasses) {
  EXPECT_THROW(correlation_matrix(0.1, {bath(ErrorClass::bit_flip, 1), bath(ErrorClass::bit_flip, 3)}, default_thermal()),
               ConfigError);
}

TEST(ThermalParams, OverrideMatchesDerivedKernels) {
  ThermalParams rounded;
  rounded.beta_omega_c = 1.9197;
  const ThermalParams derived = default_thermal();
  for (int s : {1, 3}) {
    const ReservoirSpec r = bath(ErrorClass::dephasing, s);
    const double scale = r.eta * kOmegaC * kOmegaC * std::tgamma(s + 1.0);
    for (double delta : {0.0, 0.1, 0.5, 1.0}) {
      const Autocorrelations a = bath_autocorrelations(delta, r, rounded);
      const Autocorrelations b = bath_autocorrelations(delta, r, derived);
      EXPECT_LT(std::abs(a.i1 - b.i1) / scale, 1e-6);
      EXPECT_LT(std::abs(a.i2 - b.i2) / scale, 1e-6);
    }
  }
}
