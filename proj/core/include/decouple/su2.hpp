#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace decouple {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3d;
using Mat3c = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;

namespace pauli {
const Mat2& identity();
const Mat2& x();
const Mat2& y();
const Mat2& z();
/// sigma(0..2) = (sigma_x, sigma_y, sigma_z).
const Mat2& sigma(int k);
/// v . sigma for a real or complex 3-vector.
Mat2 dot(const Vec3& v);
Mat2 dot(const Vec3c& v);
/// Coefficients c_k = (1/2) Tr[sigma_k m] of the traceless part of m.
Vec3c components(const Mat2& m);
}  // namespace pauli

/// 2x2 unitary. Constructed either from trusted formulas inside the library
/// or through from_matrix(), which checks U U^dag = I and |det U| = 1.
class QubitUnitary {
 public:
  QubitUnitary() : m_(Mat2::Identity()) {}

  static QubitUnitary from_matrix(const Mat2& m, double tol = 1e-12);
  /// Skips the unitarity check; for closed-form constructions only.
  static QubitUnitary trusted(const Mat2& m) { return QubitUnitary(m); }

  const Mat2& matrix() const { return m_; }
  QubitUnitary adjoint() const { return QubitUnitary(m_.adjoint()); }

  friend QubitUnitary operator*(const QubitUnitary& a, const QubitUnitary& b) {
    return QubitUnitary(a.m_ * b.m_);
  }

 private:
  explicit QubitUnitary(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

/// Density matrix of one qubit, stored as the 2x2 matrix. Hermitian with unit
/// trace; the Bloch vector is a derived view.
class QubitState {
 public:
  static QubitState from_matrix(const Mat2& m, double tol = 1e-12);
  /// rho = I/2 + r.sigma/2. |r| > 1 is accepted: second-order master
  /// equations can leave the Bloch ball slightly, see min_eigenvalue().
  static QubitState from_bloch(const Vec3& r);
  static QubitState maximally_mixed() { return from_bloch(Vec3::Zero()); }

  const Mat2& matrix() const { return m_; }
  Vec3 bloch() const;
  /// Smallest eigenvalue, (1 - |r|)/2.
  double min_eigenvalue() const;

 private:
  explicit QubitState(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

/// Proper rotation R with U^dag sigma_mu U = sum_nu R(mu, nu) sigma_nu.
class RotationMatrix3 {
 public:
  RotationMatrix3() : r_(Mat3::Identity()) {}
  explicit RotationMatrix3(const Mat3& r) : r_(r) {}

  const Mat3& matrix() const { return r_; }
  double operator()(int mu, int nu) const { return r_(mu, nu); }

  friend RotationMatrix3 operator*(const RotationMatrix3& a, const RotationMatrix3& b) {
    return RotationMatrix3(a.r_ * b.r_);
  }

 private:
  Mat3 r_;
};

/// Control field Omega with H_U = Omega . sigma (hbar = 1).
struct FieldVector {
  Vec3 components = Vec3::Zero();

  double x() const { return components.x(); }
  double y() const { return components.y(); }
  double z() const { return components.z(); }
  bool finite() const { return components.allFinite(); }
};

/// Differentiable curve t -> U(t). When `derivative` is empty, field
/// synthesis falls back to a central finite-difference stencil with step
/// 1e-6 * time_scale.
struct UnitaryPath {
  std::function<QubitUnitary(double)> unitary;
  std::function<Mat2(double)> derivative;
  double time_scale = 1.0;
};

/// I cos(alpha) - i (sigma . u) sin(alpha). Throws DomainError unless
/// |u| = 1 within 1e-9.
QubitUnitary unitary_from_axis_angle(double alpha, const Vec3& u);

/// R(mu, nu) = (1/2) Re Tr[sigma_nu U^dag sigma_mu U].
RotationMatrix3 rotation_from_unitary(const QubitUnitary& u);

/// Omega(t) from Omega . sigma = i (dU/dt) U^dag. The matrix i U' U^dag is
/// required to be traceless Hermitian to 1e-8 (relative to its norm, floor
/// 1); otherwise ConsistencyError.
FieldVector field_from_path(const UnitaryPath& path, double t);

/// Central-difference dU/dt (five-point stencil, step h).
Mat2 finite_difference_derivative(const std::function<QubitUnitary(double)>& u, double t, double h);

/// Pure state with Bloch vector (sin th cos ph, sin th sin ph, cos th).
QubitState density_from_bloch(double theta, double phi);

/// Re Tr[a b].
double overlap(const QubitState& a, const QubitState& b);

}  // namespace decouple
