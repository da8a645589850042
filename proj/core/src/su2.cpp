#include "decouple/su2.hpp"

#include <cmath>
#include <sstream>

#include "decouple/errors.hpp"

namespace decouple {

namespace pauli {
namespace {
const cplx kI{0.0, 1.0};

Mat2 make(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}
}  // namespace

const Mat2& identity() {
  static const Mat2 m = Mat2::Identity();
  return m;
}
const Mat2& x() {
  static const Mat2 m = make(0.0, 1.0, 1.0, 0.0);
  return m;
}
const Mat2& y() {
  static const Mat2 m = make(0.0, -kI, kI, 0.0);
  return m;
}
const Mat2& z() {
  static const Mat2 m = make(1.0, 0.0, 0.0, -1.0);
  return m;
}
const Mat2& sigma(int k) {
  switch (k) {
    case 0: return x();
    case 1: return y();
    default: return z();
  }
}

Mat2 dot(const Vec3& v) {
  return make(v.z(), cplx(v.x(), -v.y()), cplx(v.x(), v.y()), -v.z());
}

Mat2 dot(const Vec3c& v) {
  return make(v.z(), v.x() - kI * v.y(), v.x() + kI * v.y(), -v.z());
}

Vec3c components(const Mat2& m) {
  // (1/2) Tr[sigma_k m] written out for the three Pauli matrices.
  return Vec3c(0.5 * (m(1, 0) + m(0, 1)),
               0.5 * kI * (m(0, 1) - m(1, 0)),
               0.5 * (m(0, 0) - m(1, 1)));
}
}  // namespace pauli

QubitUnitary QubitUnitary::from_matrix(const Mat2& m, double tol) {
  const double defect = (m * m.adjoint() - Mat2::Identity()).cwiseAbs().maxCoeff();
  const double det = std::abs(m.determinant());
  if (!(defect <= tol) || !(std::abs(det - 1.0) <= tol)) {
    std::ostringstream os;
    os << "matrix is not unitary (|UU^dag - I|_max = " << defect << ", |det U| = " << det << ")";
    throw ConsistencyError(os.str());
  }
  return QubitUnitary(m);
}

QubitState QubitState::from_matrix(const Mat2& m, double tol) {
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double trace_defect = std::abs(m.trace() - cplx(1.0, 0.0));
  if (!(herm <= tol) || !(trace_defect <= tol)) {
    std::ostringstream os;
    os << "not a density matrix (Hermiticity defect " << herm << ", trace defect " << trace_defect << ")";
    throw ConsistencyError(os.str());
  }
  return QubitState(m);
}

QubitState QubitState::from_bloch(const Vec3& r) {
  if (!r.allFinite()) throw DomainError("Bloch vector has non-finite components");
  return QubitState(0.5 * (Mat2::Identity() + pauli::dot(r)));
}

Vec3 QubitState::bloch() const { return pauli::components(m_).real() * 2.0; }

double QubitState::min_eigenvalue() const { return 0.5 * (1.0 - bloch().norm()); }

QubitUnitary unitary_from_axis_angle(double alpha, const Vec3& u) {
  const double norm = u.norm();
  if (!(std::abs(norm - 1.0) <= 1e-9)) {
    std::ostringstream os;
    os << "rotation axis must be a unit vector, got |u| = " << norm;
    throw DomainError(os.str());
  }
  const cplx i{0.0, 1.0};
  return QubitUnitary::trusted(Mat2::Identity() * std::cos(alpha) - i * pauli::dot(u) * std::sin(alpha));
}

RotationMatrix3 rotation_from_unitary(const QubitUnitary& u) {
  const Mat2& m = u.matrix();
  const Mat2 md = m.adjoint();
  Mat3 r;
  for (int mu = 0; mu < 3; ++mu) {
    // Lambda_mu = U^dag sigma_mu U, expanded on the Pauli basis.
    const Vec3c c = pauli::components(md * pauli::sigma(mu) * m);
    for (int nu = 0; nu < 3; ++nu) r(mu, nu) = c(nu).real();
  }
  return RotationMatrix3(r);
}

Mat2 finite_difference_derivative(const std::function<QubitUnitary(double)>& u, double t, double h) {
  const Mat2 p1 = u(t + h).matrix();
  const Mat2 m1 = u(t - h).matrix();
  const Mat2 p2 = u(t + 2.0 * h).matrix();
  const Mat2 m2 = u(t - 2.0 * h).matrix();
  return (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
}

FieldVector field_from_path(const UnitaryPath& path, double t) {
  const QubitUnitary u = path.unitary(t);
  const Mat2 du = path.derivative ? path.derivative(t)
                                  : finite_difference_derivative(path.unitary, t, 1e-6 * path.time_scale);
  const cplx i{0.0, 1.0};
  const Mat2 h = i * du * u.matrix().adjoint();

  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  const double trace = std::abs(h.trace());
  if (!(herm <= 1e-8 * scale) || !(trace <= 1e-8 * scale)) {
    std::ostringstream os;
    os << "i dU/dt U^dag is not traceless Hermitian at t = " << t << " (Hermiticity defect " << herm
       << ", |trace| " << trace << "); the path is not unitary";
    throw ConsistencyError(os.str());
  }
  FieldVector f;
  f.components = pauli::components(h).real();
  return f;
}

QubitState density_from_bloch(double theta, double phi) {
  const Vec3 r(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  return QubitState::from_bloch(r);
}

double overlap(const QubitState& a, const QubitState& b) { return (a.matrix() * b.matrix()).trace().real(); }

}  // namespace decouple
