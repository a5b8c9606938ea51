#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace cvqc {

inline constexpr double kPi = 3.14159265358979323846;

// Shared tolerances. All matrix comparisons in this library use the maximum
// absolute entry difference.
inline constexpr double kMatrixTol = 1e-9;  // generic matrix/phase identities
inline constexpr double kTightTol = 1e-12;  // exact-constant reproduction
inline constexpr double kPoleEps = 1e-9;    // radians from a tan/cot pole

struct SingularPhaseError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NotSymplecticError : std::domain_error {
  using std::domain_error::domain_error;
};

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A homodyne/rotator phase in radians. Finite by construction.
class PhaseAngle {
 public:
  PhaseAngle(double radians) : value_(radians) {
    if (!std::isfinite(radians))
      throw std::domain_error("phase angle must be finite");
  }

  double radians() const { return value_; }

  // Wraps into (-pi, pi].
  PhaseAngle canonical() const {
    double r = std::remainder(value_, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return PhaseAngle(r);
  }

 private:
  double value_;
};

// Variance of the squeezed ancilla y-quadratures, in units where the vacuum
// variance is 1/4. Squeezing means strictly below vacuum.
class SqueezeVariance {
 public:
  explicit SqueezeVariance(double sigma2) : value_(sigma2) {
    if (!(sigma2 > 0.0) || !(sigma2 < 0.25))
      throw std::domain_error(
          "squeeze variance must lie in (0, 0.25): got " +
          std::to_string(sigma2));
  }

  double value() const { return value_; }

 private:
  double value_;
};

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  return (a - b).cwiseAbs().maxCoeff();
}

// Distance from theta to the nearest pole of tan (odd multiples of pi/2).
inline double tan_pole_distance(double theta) {
  return std::abs(std::remainder(theta - 0.5 * kPi, kPi));
}

// Distance from theta to the nearest pole of cot (multiples of pi).
inline double cot_pole_distance(double theta) {
  return std::abs(std::remainder(theta, kPi));
}

inline double checked_tan(double theta) {
  if (tan_pole_distance(theta) < kPoleEps)
    throw SingularPhaseError("singular phase configuration");
  return std::tan(theta);
}

inline double checked_cot(double theta) {
  if (cot_pole_distance(theta) < kPoleEps)
    throw SingularPhaseError("singular phase configuration");
  return 1.0 / std::tan(theta);
}

}  // namespace cvqc
