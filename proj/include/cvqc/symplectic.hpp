#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

#include "cvqc/core.hpp"

namespace cvqc {

// Symplectic form for the (x_1..x_n, y_1..y_n) quadrature ordering with
// [x_i, y_i] = i/2: Omega has +1/2 in the (x_i, y_i) slots, antisymmetric.
inline Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i) {
    omega(i, modes + i) = 0.5;
    omega(modes + i, i) = -0.5;
  }
  return omega;
}

// Deviation of m from symplecticity (M Omega M^T = Omega), max-entry norm.
inline double symplectic_defect(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw DimensionError("symplectic_defect: matrix must be square 2n x 2n");
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(m.rows()) / 2);
  return max_abs_diff(m * omega * m.transpose(), omega);
}

inline bool is_symplectic(const Eigen::MatrixXd& m, double tol = kMatrixTol) {
  return symplectic_defect(m) <= tol;
}

// A 2x2 quadrature transformation with det 1 (checked on construction).
class SymplecticMatrix2 {
 public:
  explicit SymplecticMatrix2(const Eigen::Matrix2d& m) : m_(m) {
    if (!m.allFinite())
      throw std::domain_error("symplectic matrix entries must be finite");
    if (std::abs(m.determinant() - 1.0) > kMatrixTol)
      throw NotSymplecticError("not symplectic: det deviates from 1 by " +
                               std::to_string(std::abs(m.determinant() - 1.0)));
  }

  const Eigen::Matrix2d& matrix() const { return m_; }
  double determinant() const { return m_.determinant(); }

 private:
  Eigen::Matrix2d m_;
};

// A 4x4 quadrature transformation on (x1, x2, y1, y2), checked to preserve
// the symplectic form of that ordering.
class SymplecticMatrix4 {
 public:
  explicit SymplecticMatrix4(const Eigen::Matrix4d& m) : m_(m) {
    if (!m.allFinite())
      throw std::domain_error("symplectic matrix entries must be finite");
    const double defect = symplectic_defect(m);
    if (defect > kMatrixTol)
      throw NotSymplecticError("not symplectic: form defect " +
                               std::to_string(defect));
  }

  const Eigen::Matrix4d& matrix() const { return m_; }

 private:
  Eigen::Matrix4d m_;
};

inline Eigen::Matrix2d rotation(PhaseAngle theta) {
  const double c = std::cos(theta.radians()), s = std::sin(theta.radians());
  Eigen::Matrix2d m;
  m << c, -s, s, c;
  return m;
}

inline Eigen::Matrix2d squeeze(double r) {
  if (!std::isfinite(r)) throw std::domain_error("squeeze parameter must be finite");
  Eigen::Matrix2d m;
  m << std::exp(-r), 0.0, 0.0, std::exp(r);
  return m;
}

// The squeeze-like gate induced by measuring a two-node cluster with phase
// difference theta_minus: M = diag(1/t, t) with t = tan(theta_minus / 2).
// Equals squeeze(ln t) for t > 0, and stays well defined for t < 0, which the
// negative-phase gate parameterizations require.
inline Eigen::Matrix2d measurement_gate(PhaseAngle theta_minus) {
  const double tm = theta_minus.canonical().radians();
  // Degenerate when tan(tm/2) vanishes (tm near 0) or diverges (tm near +-pi).
  if (std::abs(tm) < 2.0 * kPoleEps || kPi - std::abs(tm) < 2.0 * kPoleEps)
    throw SingularPhaseError("degenerate squeeze phase");
  const double t = std::tan(0.5 * tm);
  Eigen::Matrix2d m;
  m << 1.0 / t, 0.0, 0.0, t;
  return m;
}

// Matrix product in listed order; the last listed factor acts on the state
// first. An empty list is the identity of dimension `dim_if_empty`.
inline Eigen::MatrixXd compose(std::span<const Eigen::MatrixXd> ms,
                               int dim_if_empty = 2) {
  if (ms.empty())
    return Eigen::MatrixXd::Identity(dim_if_empty, dim_if_empty);
  const auto dim = ms.front().rows();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& m : ms) {
    if (m.rows() != dim || m.cols() != dim)
      throw DimensionError("compose: dimension mismatch");
    acc = acc * m;
  }
  return acc;
}

inline Eigen::MatrixXd compose(std::initializer_list<Eigen::MatrixXd> ms,
                               int dim_if_empty = 2) {
  std::vector<Eigen::MatrixXd> v(ms);
  return compose(std::span<const Eigen::MatrixXd>(v), dim_if_empty);
}

inline SymplecticMatrix2 compose(std::span<const SymplecticMatrix2> ms) {
  Eigen::Matrix2d acc = Eigen::Matrix2d::Identity();
  for (const auto& m : ms) acc = acc * m.matrix();
  return SymplecticMatrix2(acc);
}

inline SymplecticMatrix4 compose(std::span<const SymplecticMatrix4> ms) {
  Eigen::Matrix4d acc = Eigen::Matrix4d::Identity();
  for (const auto& m : ms) acc = acc * m.matrix();
  return SymplecticMatrix4(acc);
}

// target = R(alpha) * diag(s, 1/s) * R(beta), canonical branch s >= 1.
struct EulerFactors {
  PhaseAngle alpha;
  double s;
  PhaseAngle beta;

  Eigen::Matrix2d reconstruct() const {
    Eigen::Matrix2d d;
    d << s, 0.0, 0.0, 1.0 / s;
    return rotation(alpha) * d * rotation(beta);
  }
};

// Euler (rotation-squeeze-rotation) decomposition of a det-1 matrix.
// Branch fixing: s >= 1; pure rotations get beta = 0; otherwise the
// (alpha, beta) -> (alpha+pi, beta+pi) ambiguity is resolved by requiring
// beta in (-pi/2, pi/2].
inline EulerFactors euler_decompose(const Eigen::Matrix2d& u) {
  if (!u.allFinite()) throw std::domain_error("euler_decompose: NaN entries");
  // For entries of magnitude B the float determinant carries O(eps B^2)
  // cancellation noise, so the unit-determinant check scales with it.
  const double scale = std::max(1.0, u.cwiseAbs().maxCoeff());
  const double det_tol =
      std::max(kMatrixTol, 32.0 * std::numeric_limits<double>::epsilon() *
                               scale * scale);
  if (std::abs(u.determinant() - 1.0) > det_tol)
    throw NotSymplecticError("euler_decompose: det deviates from 1");

  // u u^T = R(alpha) diag(s^2, 1/s^2) R(-alpha). The squeeze magnitude comes
  // from the cancellation-free forms
  //   (s - 1/s)^2 = tr(u u^T) - 2 det = (a - d)^2 + (b + c)^2,
  //   (s + 1/s)^2 = tr(u u^T) + 2 det = (a + d)^2 + (b - c)^2,
  // which keep full relative precision for near-rotations and make exact
  // rotation matrices land exactly on s = 1.
  const double a = u(0, 0), b = u(0, 1), c = u(1, 0), d = u(1, 1);
  const double diff2 = (a - d) * (a - d) + (b + c) * (b + c);
  const double sum2 = (a + d) * (a + d) + (b - c) * (b - c);
  const double s = 0.5 * (std::sqrt(sum2) + std::sqrt(diff2));

  if (s - 1.0 <= 1e-12) {
    // Pure rotation: alpha carries the whole angle.
    return EulerFactors{PhaseAngle(std::atan2(u(1, 0), u(0, 0))).canonical(),
                        1.0, PhaseAngle(0.0)};
  }
  const double p = u.row(0).squaredNorm();
  const double r = u.row(1).squaredNorm();
  const double q = u.row(0).dot(u.row(1));

  double alpha = 0.5 * std::atan2(2.0 * q, p - r);
  // R(-alpha) u = diag(s, 1/s) R(beta); the top row s (cos beta, -sin beta)
  // carries the full scale, so reading beta off it stays accurate for any s
  // (the bottom row is 1/s-suppressed and would amplify rounding noise).
  const Eigen::Matrix2d residual = rotation(PhaseAngle(-alpha)) * u;
  double beta = std::atan2(-residual(0, 1), residual(0, 0));
  if (beta <= -0.5 * kPi || beta > 0.5 * kPi) {
    alpha += kPi;
    beta += kPi;
  }
  return EulerFactors{PhaseAngle(alpha).canonical(), s,
                      PhaseAngle(beta).canonical()};
}

inline EulerFactors euler_decompose(const SymplecticMatrix2& u) {
  return euler_decompose(u.matrix());
}

}  // namespace cvqc
