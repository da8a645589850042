#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "decouple/errors.hpp"
#include "decouple/su2.hpp"

using namespace decouple;
using std::numbers::pi;

namespace {

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

QubitUnitary random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const Vec3 axis = Vec3(g(rng), g(rng), g(rng)).normalized();
  const double angle = std::uniform_real_distribution<double>(-pi, pi)(rng);
  const double phase = std::uniform_real_distribution<double>(-pi, pi)(rng);
  return QubitUnitary::from_matrix(std::exp(cplx(0, phase)) * unitary_from_axis_angle(angle, axis).matrix());
}

/// R(mu, nu) = (1/2) Re Tr[sigma_nu U^dag sigma_mu U] by explicit products.
Mat3 brute_force_rotation(const Mat2& u) {
  Mat3 r;
  for (int mu = 0; mu < 3; ++mu) {
    for (int nu = 0; nu < 3; ++nu) {
      Mat2 prod = pauli::sigma(nu);
      prod = prod * u.adjoint();
      prod = prod * pauli::sigma(mu);
      prod = prod * u;
      r(mu, nu) = 0.5 * prod.trace().real();
    }
  }
  return r;
}

}  // namespace

TEST(AxisAngle, ZeroAngleIsIdentity) {
  EXPECT_LT(max_abs(unitary_from_axis_angle(0.0, Vec3::UnitZ()).matrix() - Mat2::Identity()), 1e-15);
}

TEST(AxisAngle, HalfTurnIsMinusIdentity) {
  EXPECT_LT(max_abs(unitary_from_axis_angle(pi, Vec3::UnitX()).matrix() + Mat2::Identity()), 1e-15);
}

TEST(AxisAngle, QuarterTurnAboutZ) {
  const Mat2 expected = cplx(0, -1) * pauli::z();
  EXPECT_LT(max_abs(unitary_from_axis_angle(pi / 2, Vec3::UnitZ()).matrix() - expected), 1e-15);
}

TEST(AxisAngle, RejectsNonUnitAxis) {
  EXPECT_THROW(unitary_from_axis_angle(0.3, Vec3(1.0, 1.0, 0.0)), DomainError);
  EXPECT_THROW(unitary_from_axis_angle(0.3, Vec3::Zero()), DomainError);
}

TEST(AxisAngle, ResultIsUnitaryWithUnitDeterminant) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Mat2 u = random_unitary(rng).matrix();
    EXPECT_LT(max_abs(u * u.adjoint() - Mat2::Identity()), 1e-12);
    EXPECT_NEAR(std::abs(u.determinant()), 1.0, 1e-12);
  }
}

TEST(QubitUnitary, FromMatrixRejectsNonUnitary) {
  Mat2 m = Mat2::Identity();
  m(0, 0) = 1.1;
  EXPECT_THROW(QubitUnitary::from_matrix(m), ConsistencyError);
}

TEST(Rotation, IdentityMapsToIdentity) {
  EXPECT_LT((rotation_from_unitary(QubitUnitary()).matrix() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Rotation, SigmaZFixesZAxis) {
  const RotationMatrix3 r = rotation_from_unitary(QubitUnitary::from_matrix(cplx(0, -1) * pauli::z()));
  EXPECT_NEAR(r(2, 2), 1.0, 1e-15);
  EXPECT_NEAR(r(2, 0), 0.0, 1e-15);
  EXPECT_NEAR(r(2, 1), 0.0, 1e-15);
}

TEST(Rotation, MatchesBruteForceProducts) {
  const QubitUnitary u = unitary_from_axis_angle(0.3, Vec3::UnitX());
  const Mat3 expected = brute_force_rotation(u.matrix());
  EXPECT_LT((rotation_from_unitary(u).matrix() - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Rotation, IsProperOrthogonal) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Mat3 r = rotation_from_unitary(random_unitary(rng)).matrix();
    EXPECT_LT((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  }
}

TEST(Rotation, HomomorphismProperty) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const QubitUnitary a = random_unitary(rng), b = random_unitary(rng);
    const Mat3 lhs = rotation_from_unitary(a * b).matrix();
    const Mat3 rhs = (rotation_from_unitary(a) * rotation_from_unitary(b)).matrix();
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Rotation, AdjointIdentity) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const QubitUnitary u = random_unitary(rng);
    const RotationMatrix3 r = rotation_from_unitary(u);
    for (int mu = 0; mu < 3; ++mu) {
      Mat2 expansion = Mat2::Zero();
      for (int nu = 0; nu < 3; ++nu) expansion += r(mu, nu) * pauli::sigma(nu);
      const Mat2 conj = u.matrix().adjoint() * pauli::sigma(mu) * u.matrix();
      EXPECT_LT(max_abs(conj - expansion), 1e-10);
    }
  }
}

TEST(FieldFromPath, StaticAxisRotation) {
  const double omega = 2.7;
  UnitaryPath path;
  path.unitary = [&](double t) { return unitary_from_axis_angle(omega * t, Vec3::UnitZ()); };
  const FieldVector f = field_from_path(path, 0.4);
  EXPECT_NEAR(f.x(), 0.0, 1e-9);
  EXPECT_NEAR(f.y(), 0.0, 1e-9);
  EXPECT_NEAR(f.z(), omega, 1e-8);
}

TEST(FieldFromPath, ConstantPathHasNoField) {
  UnitaryPath path;
  path.unitary = [](double) { return QubitUnitary(); };
  EXPECT_LT(field_from_path(path, 0.5).components.norm(), 1e-15);
}

TEST(FieldFromPath, AnalyticDerivativeIsUsedWhenGiven) {
  const double omega = 1.3;
  UnitaryPath path;
  path.unitary = [&](double t) { return unitary_from_axis_angle(omega * t, Vec3::UnitY()); };
  path.derivative = [&](double t) {
    return Mat2(-omega * std::sin(omega * t) * Mat2::Identity() - cplx(0, 1) * omega * std::cos(omega * t) * pauli::y());
  };
  const FieldVector f = field_from_path(path, 0.9);
  EXPECT_NEAR(f.y(), omega, 1e-14);
  EXPECT_NEAR(f.x(), 0.0, 1e-14);
}

TEST(FieldFromPath, InconsistentDerivativeIsRejected) {
  UnitaryPath path;
  path.unitary = [](double) { return QubitUnitary(); };
  path.derivative = [](double) { return Mat2(Mat2::Identity()); };  // i U' U^dag = i I is not Hermitian
  EXPECT_THROW(field_from_path(path, 0.1), ConsistencyError);
}

TEST(DensityFromBloch, NorthPole) {
  Mat2 expected = Mat2::Zero();
  expected(0, 0) = 1.0;
  EXPECT_LT(max_abs(density_from_bloch(0.0, 0.0).matrix() - expected), 1e-15);
}

TEST(DensityFromBloch, EquatorPointsAlongX) {
  const Mat2 expected = 0.5 * (Mat2::Identity() + pauli::x());
  EXPECT_LT(max_abs(density_from_bloch(pi / 2, 0.0).matrix() - expected), 1e-15);
}

TEST(DensityFromBloch, EquatorPointsAlongY) {
  const Mat2 expected = 0.5 * (Mat2::Identity() + pauli::y());
  EXPECT_LT(max_abs(density_from_bloch(pi / 2, pi / 2).matrix() - expected), 1e-15);
}

TEST(DensityFromBloch, PureStatesHaveEigenvaluesZeroAndOne) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> th(0, pi), ph(0, 2 * pi);
  for (int i = 0; i < 200; ++i) {
    const QubitState rho = density_from_bloch(th(rng), ph(rng));
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho.matrix());
    EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-12);
    EXPECT_NEAR(rho.bloch().norm(), 1.0, 1e-12);
    EXPECT_LT(max_abs(rho.matrix() - rho.matrix().adjoint()), 1e-12);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  }
}

TEST(QubitState, FromMatrixValidates) {
  Mat2 m = Mat2::Identity();
  EXPECT_THROW(QubitState::from_matrix(m), ConsistencyError);  // trace 2
  m << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(QubitState::from_matrix(m), ConsistencyError);  // not Hermitian
}

TEST(QubitState, MinEigenvalueTracksBlochLength) {
  EXPECT_NEAR(QubitState::from_bloch(Vec3(0.0, 0.0, 0.5)).min_eigenvalue(), 0.25, 1e-15);
  EXPECT_NEAR(QubitState::from_bloch(Vec3(0.0, 1.1, 0.0)).min_eigenvalue(), -0.05, 1e-15);
}

TEST(Overlap, PureStateWithItself) {
  const QubitState rho = density_from_bloch(0.7, 1.9);
  EXPECT_NEAR(overlap(rho, rho), 1.0, 1e-15);
}

TEST(Overlap, AntipodalStates) {
  EXPECT_NEAR(overlap(density_from_bloch(pi / 2, 0.0), density_from_bloch(pi / 2, pi)), 0.0, 1e-15);
}

TEST(Overlap, MaximallyMixed) {
  EXPECT_NEAR(overlap(density_from_bloch(pi / 2, 0.0), QubitState::maximally_mixed()), 0.5, 1e-15);
}
