#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cvqc/core.hpp"
#include "cvqc/symplectic.hpp"

namespace cvqc {

// Every computation scheme covered by the library. FourNode1..4 are the
// linear four-node cluster variants, FourNode5 the square cluster.
enum class SchemeId {
  FourNode1,
  FourNode2,
  FourNode3,
  FourNode4,
  FourNode5,
  TwoNode,
  PairTwoNodeCase1,
  PairTwoNodeCase2,
  TwoNodeRotator,
  CzFourNode,
  CzTwoNodeStretch,
  CzBeamSplitter,
};

inline const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::FourNode1: return "FourNode1";
    case SchemeId::FourNode2: return "FourNode2";
    case SchemeId::FourNode3: return "FourNode3";
    case SchemeId::FourNode4: return "FourNode4";
    case SchemeId::FourNode5: return "FourNode5";
    case SchemeId::TwoNode: return "TwoNode";
    case SchemeId::PairTwoNodeCase1: return "PairTwoNodeCase1";
    case SchemeId::PairTwoNodeCase2: return "PairTwoNodeCase2";
    case SchemeId::TwoNodeRotator: return "TwoNodeRotator";
    case SchemeId::CzFourNode: return "CzFourNode";
    case SchemeId::CzTwoNodeStretch: return "CzTwoNodeStretch";
    case SchemeId::CzBeamSplitter: return "CzBeamSplitter";
  }
  return "?";
}

inline const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> ids = {
      SchemeId::FourNode1,        SchemeId::FourNode2,
      SchemeId::FourNode3,        SchemeId::FourNode4,
      SchemeId::FourNode5,        SchemeId::TwoNode,
      SchemeId::PairTwoNodeCase1, SchemeId::PairTwoNodeCase2,
      SchemeId::TwoNodeRotator,   SchemeId::CzFourNode,
      SchemeId::CzTwoNodeStretch, SchemeId::CzBeamSplitter};
  return ids;
}

inline SchemeId scheme_from_string(const std::string& name) {
  for (SchemeId id : all_schemes())
    if (name == to_string(id)) return id;
  throw std::invalid_argument("unknown scheme: " + name);
}

inline bool is_four_node(SchemeId id) {
  return id == SchemeId::FourNode1 || id == SchemeId::FourNode2 ||
         id == SchemeId::FourNode3 || id == SchemeId::FourNode4 ||
         id == SchemeId::FourNode5;
}

// Number of phase parameters the scheme takes.
inline int scheme_phase_arity(SchemeId id) {
  switch (id) {
    case SchemeId::FourNode1:
    case SchemeId::FourNode2:
    case SchemeId::FourNode3:
    case SchemeId::FourNode4:
    case SchemeId::FourNode5:
      return 4;  // theta_1..theta_4
    case SchemeId::TwoNode:
      return 2;  // theta_plus, theta_minus
    case SchemeId::PairTwoNodeCase1:
    case SchemeId::PairTwoNodeCase2:
      return 4;  // theta_plus^1, theta_minus^1, theta_plus^2, theta_minus^2
    case SchemeId::TwoNodeRotator:
      return 3;  // phi, theta_plus, theta_minus
    default:
      return 0;  // CZ schemes: phases fixed by the protocol
  }
}

// Number of squeezed ancilla oscillators feeding the scheme's error map.
inline int scheme_ancilla_count(SchemeId id) {
  switch (id) {
    case SchemeId::TwoNode:
    case SchemeId::TwoNodeRotator:
      return 2;
    case SchemeId::CzTwoNodeStretch:
      return 6;
    default:
      return 4;
  }
}

inline int scheme_mode_count(SchemeId id) {
  switch (id) {
    case SchemeId::CzFourNode:
    case SchemeId::CzTwoNodeStretch:
    case SchemeId::CzBeamSplitter:
      return 2;
    default:
      return 1;
  }
}

// Ordered phase list; slot meaning is scheme-dependent (see scheme_phase_arity).
class SchemePhases {
 public:
  SchemePhases() = default;
  explicit SchemePhases(std::vector<PhaseAngle> theta) : theta_(std::move(theta)) {}

  // Four-node homodyne phases theta_1..theta_4; the matrices depend on
  // theta_1, theta_2 only through theta_pm = theta_2 -+/+ theta_1.
  static SchemePhases four_node(PhaseAngle t1, PhaseAngle t2, PhaseAngle t3,
                                PhaseAngle t4) {
    return SchemePhases({t1, t2, t3, t4});
  }
  static SchemePhases two_node(PhaseAngle theta_plus, PhaseAngle theta_minus) {
    return SchemePhases({theta_plus, theta_minus});
  }
  static SchemePhases pair(PhaseAngle plus1, PhaseAngle minus1,
                           PhaseAngle plus2, PhaseAngle minus2) {
    return SchemePhases({plus1, minus1, plus2, minus2});
  }
  static SchemePhases rotator(PhaseAngle phi, PhaseAngle theta_plus,
                              PhaseAngle theta_minus) {
    return SchemePhases({phi, theta_plus, theta_minus});
  }
  static SchemePhases none() { return SchemePhases(); }

  size_t size() const { return theta_.size(); }
  PhaseAngle operator[](size_t i) const { return theta_.at(i); }
  const std::vector<PhaseAngle>& list() const { return theta_; }

  void require_arity(SchemeId id) const {
    if (static_cast<int>(theta_.size()) != scheme_phase_arity(id))
      throw std::invalid_argument(
          std::string("scheme ") + to_string(id) + " takes " +
          std::to_string(scheme_phase_arity(id)) + " phases, got " +
          std::to_string(theta_.size()));
  }

  // Derived sums for four-node phases: theta_pm = theta_2 +- theta_1.
  double theta_plus() const { return theta_.at(1).radians() + theta_.at(0).radians(); }
  double theta_minus() const { return theta_.at(1).radians() - theta_.at(0).radians(); }

 private:
  std::vector<PhaseAngle> theta_;
};

// Linear map from squeezed ancilla y-quadratures to additive output error.
// Rows follow the output ordering (x_1..x_n, y_1..y_n); one column per ancilla.
using ErrorMap = Eigen::MatrixXd;

// Per-output-quadrature error variance in units of the ancilla squeeze
// variance sigma^2.
using VarianceVector = Eigen::VectorXd;

inline VarianceVector variance_from_error_map(const ErrorMap& e, SqueezeVariance sigma2) {
  return sigma2.value() * (e * e.transpose()).diagonal();
}

// diag(E E^T): the variance vector with sigma^2 = 1.
inline VarianceVector error_map_variance_units(const ErrorMap& e) {
  return (e * e.transpose()).diagonal();
}

struct SchemeRealization {
  SchemeId id;
  Eigen::MatrixXd matrix;  // 2x2 or 4x4, symplectic in the library ordering
  ErrorMap error_map;      // rows match matrix rows
  // CzFourNode stores a diagonal stand-in whose diag(EE^T) equals the known
  // variance constant; the genuine map lives in the cluster-generation layer,
  // outside this library's scope.
  bool surrogate_error_map = false;
};

namespace detail {

inline void validate_realization(const SchemeRealization& r) {
  const auto n = r.matrix.rows();
  if (n == 2) {
    SymplecticMatrix2 check{Eigen::Matrix2d(r.matrix)};
  } else {
    SymplecticMatrix4 check{Eigen::Matrix4d(r.matrix)};
  }
  if (r.error_map.rows() != n)
    throw DimensionError("error map rows must match output quadrature count");
  if (r.error_map.cols() != scheme_ancilla_count(r.id))
    throw DimensionError("error map columns must match the ancilla count");
}

}  // namespace detail

// Constants of the four-node error maps.
inline const double kD1 = std::sqrt(5.0) + 3.0;
inline const double kD2 = std::sqrt(5.0 * (5.0 + 2.0 * std::sqrt(5.0)));

// The CZ transformation on (x1, x2, y1, y2): adds each mode's x to the
// other mode's y.
inline Eigen::Matrix4d cz_matrix() {
  Eigen::Matrix4d u;
  u << 1, 0, 0, 0,
       0, 1, 0, 0,
       0, 1, 1, 0,
       1, 0, 0, 1;
  return u;
}

// Symmetric 50:50 beam splitter mixing two modes, on (x1, x2, y1, y2).
inline Eigen::Matrix4d symmetric_beam_splitter() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix4d b;
  b << s, s, 0, 0,
       s, -s, 0, 0,
       0, 0, s, s,
       0, 0, s, -s;
  return b;
}

namespace detail {

// R(-theta_plus/2) * M(theta_minus) * R(-theta_plus/2): the measurement-induced
// single-mode transformation of a two-node cluster.
inline Eigen::Matrix2d two_node_core(double theta_plus, double theta_minus) {
  const Eigen::Matrix2d half = rotation(PhaseAngle(-0.5 * theta_plus));
  return half * measurement_gate(PhaseAngle(theta_minus)) * half;
}

// Phase-dependent 2x4 prefactor and d1-matrix of the four-node error maps,
// printed form. `a3`, `a4` are the already sign-adjusted arguments.
inline ErrorMap four_node_error_printed(int config, double a3, double a4) {
  Eigen::Matrix<double, 2, 4> p;
  Eigen::Matrix4d d;
  double pref = 1.0 / kD2;
  switch (config) {
    case 1: {
      const double ct4 = checked_cot(a4), tt3 = checked_tan(a3);
      p << 3 * ct4, ct4, -1 - 2 * ct4 * tt3, -3 - ct4 * tt3,
           -2, 1, 2 * tt3, tt3;
      d << kD1 - 1, -1, 0, 0,
           -1, kD1, 0, 0,
           0, 0, kD1, -1,
           0, 0, -1, kD1 - 1;
      break;
    }
    case 2: {
      const double ct3 = checked_cot(a3), tt4 = checked_tan(a4);
      p << 2 * ct3, ct3, -3, -1,
           -2 * ct3 * tt4 - 1, 2 - ct3 * tt4, 2 * tt4, -tt4;
      d << kD1, -1, 0, 0,
           -1, kD1 - 1, 0, 0,
           0, 0, kD1 - 1, -1,
           0, 0, -1, kD1;
      break;
    }
    case 3: {
      const double ct3 = checked_cot(a3), ct4 = checked_cot(a4);
      p << 1 - 2 * ct3 * ct4, ct3, 3 * ct3, -2 - ct3 * ct4,
           2 * ct4, 1, -2, ct4;
      d << kD1, 0, 0, -1,
           0, kD1, -1, 0,
           0, -1, kD1 - 1, 0,
           -1, 0, 0, kD1 - 1;
      break;
    }
    case 4: {
      const double tt3 = checked_tan(a3), tt4 = checked_tan(a4);
      p << -3, tt3, 2 * tt3, -1,
           2 * tt4, 3 - tt3 * tt4, 1 - 2 * tt3 * tt4, -tt4;
      d << kD1 - 1, 0, 0, -1,
           0, kD1 - 1, -1, 0,
           0, -1, kD1, 0,
           -1, 0, 0, kD1;
      break;
    }
    case 5: {
      const double tt3 = checked_tan(a3), tt4 = checked_tan(a4);
      p << tt3 * tt4 - 3, 2 * tt4, 3 * tt4, -tt3 * tt4 - 2,
           tt3, 3, 2, -tt3;
      d << kD1, 0, 0, -2,
           0, kD1, -2, 0,
           0, -2, kD1, 0,
           -2, 0, 0, kD1;
      pref = 1.0 / (kD1 + 2.0);
      break;
    }
    default:
      throw std::invalid_argument("four-node config must be 1..5");
  }
  return pref * (p * d);
}

// Error map of configuration `config` as a function of its own homodyne
// phases. The printed per-configuration maps disagree with the common
// closed-form variance the schemes provably share; negating the theta_4
// argument (and, for configuration 3, swapping the two arguments) restores
// that identity exactly, so the maps are evaluated on the adjusted arguments.
inline ErrorMap four_node_error_map(int config, double t3, double t4) {
  if (config == 3) return four_node_error_printed(3, t4, -t3);
  return four_node_error_printed(config, t3, -t4);
}

inline Eigen::Matrix2d four_node_inner(int config, double t3, double t4) {
  Eigen::Matrix2d p;
  switch (config) {
    case 1: {
      const double ct4 = checked_cot(t4), tt3 = checked_tan(t3);
      p << -ct4 * tt3 - 1, ct4, tt3, -1;
      break;
    }
    case 2: {
      const double ct3 = checked_cot(t3), tt4 = checked_tan(t4);
      p << -ct3 * tt4 - 1, -tt4, -ct3, -1;
      break;
    }
    case 3: {
      const double ct3 = checked_cot(t3), ct4 = checked_cot(t4);
      p << ct4 * ct3 - 1, ct4, -ct3, -1;
      break;
    }
    case 4:
    case 5: {
      const double tt3 = checked_tan(t3), tt4 = checked_tan(t4);
      p << tt3 * tt4 - 1, -tt4, tt3, -1;
      break;
    }
    default:
      throw std::invalid_argument("four-node config must be 1..5");
  }
  return p;
}

}  // namespace detail

// Universal single-mode transformation on a four-node cluster, configuration
// j = 1..5. Phases are the homodyne angles theta_1..theta_4.
inline SchemeRealization four_node_realization(SchemeId id, const SchemePhases& phases) {
  if (!is_four_node(id)) throw std::invalid_argument("not a four-node scheme");
  phases.require_arity(id);
  const int config = static_cast<int>(id) - static_cast<int>(SchemeId::FourNode1) + 1;
  const double tp = phases.theta_plus();
  const double tm = phases.theta_minus();
  const double t3 = phases[2].radians();
  const double t4 = phases[3].radians();

  const Eigen::Matrix2d inner = detail::four_node_inner(config, t3, t4);
  const Eigen::Matrix2d core = detail::two_node_core(tp, tm);
  Eigen::Matrix2d u;
  switch (config) {
    case 1: u = inner * rotation(PhaseAngle(kPi / 2)) * core; break;
    case 2: u = rotation(PhaseAngle(kPi / 2)) * inner * core; break;
    case 3: u = inner * rotation(PhaseAngle(kPi)) * core; break;
    case 4:
      u = rotation(PhaseAngle(-kPi / 2)) * inner * rotation(PhaseAngle(kPi / 2)) * core;
      break;
    default: u = inner * core; break;
  }

  SchemeRealization r{id, u, detail::four_node_error_map(config, t3, t4), false};
  detail::validate_realization(r);
  return r;
}

// Common error variance of all five four-node configurations, in
// configuration-3 phases and units sigma^2 = 1.
inline VarianceVector four_node_variance_closed_form(PhaseAngle theta3, PhaseAngle theta4) {
  const double ct3 = checked_cot(theta3.radians());
  const double ct4 = checked_cot(theta4.radians());
  const double st4 = std::sin(theta4.radians());
  VarianceVector v(2);
  v << 2.0 * ct3 * ct4 * (1.0 + ct3 * ct4) + 3.0 / (st4 * st4),
       3.0 + 2.0 * ct3 * ct3;
  return v;
}

// Non-universal single-mode transformation on one two-node cluster:
// R(-tp/2) M(tm) R(-tp/2) with additive error sqrt(2) (y_1, y_2).
inline SchemeRealization two_node_realization(const SchemePhases& phases) {
  phases.require_arity(SchemeId::TwoNode);
  const double tp = phases[0].radians(), tm = phases[1].radians();
  SchemeRealization r{SchemeId::TwoNode, detail::two_node_core(tp, tm),
                      std::sqrt(2.0) * Eigen::Matrix2d::Identity(), false};
  detail::validate_realization(r);
  return r;
}

// Universal single-mode transformation on a pair of two-node clusters.
// Case 1 pins theta_minus^1 = pi/2, case 2 pins theta_minus^2 = pi/2 (the
// corresponding input slot is ignored); ancilla order is (y_1..y_4) with the
// first cluster's oscillators first.
inline SchemeRealization pair_two_node_realization(SchemeId id, const SchemePhases& phases) {
  if (id != SchemeId::PairTwoNodeCase1 && id != SchemeId::PairTwoNodeCase2)
    throw std::invalid_argument("not a pair-of-two-node scheme");
  phases.require_arity(id);
  const double tp1 = phases[0].radians();
  const double tp2 = phases[2].radians();
  const double s2 = std::sqrt(2.0);
  Eigen::Matrix2d u;
  ErrorMap e(2, 4);
  if (id == SchemeId::PairTwoNodeCase1) {
    const double tm2 = phases[3].radians();
    const Eigen::Matrix2d w = detail::two_node_core(tp2, tm2);
    u = rotation(PhaseAngle(-0.5 * tp2)) * measurement_gate(PhaseAngle(tm2)) *
        rotation(PhaseAngle(-0.5 * tp2 - tp1));
    e << s2 * w, s2 * Eigen::Matrix2d::Identity();
  } else {
    const double tm1 = phases[1].radians();
    u = rotation(PhaseAngle(-tp2 - 0.5 * tp1)) * measurement_gate(PhaseAngle(tm1)) *
        rotation(PhaseAngle(-0.5 * tp1));
    e << s2 * rotation(PhaseAngle(-tp2)), s2 * Eigen::Matrix2d::Identity();
  }
  SchemeRealization r{id, u, e, false};
  detail::validate_realization(r);
  return r;
}

// Universal single-mode transformation on one two-node cluster plus a
// noiseless quadrature rotator R(phi): R(phi - tp/2) M(tm) R(-tp/2) with
// error sqrt(2) R(phi); the variance is (2, 2) sigma^2 for any phases.
inline SchemeRealization rotator_realization(const SchemePhases& phases) {
  phases.require_arity(SchemeId::TwoNodeRotator);
  const double phi = phases[0].radians();
  const double tp = phases[1].radians(), tm = phases[2].radians();
  const Eigen::Matrix2d u = rotation(PhaseAngle(phi - 0.5 * tp)) *
                            measurement_gate(PhaseAngle(tm)) *
                            rotation(PhaseAngle(-0.5 * tp));
  SchemeRealization r{SchemeId::TwoNodeRotator, u,
                      std::sqrt(2.0) * rotation(PhaseAngle(phi)), false};
  detail::validate_realization(r);
  return r;
}

inline const VarianceVector& cz_four_node_variance() {
  static const VarianceVector v = (VarianceVector(4) << 2, 2, 3, 3).finished();
  return v;
}

// CZ on a linear four-node cluster. The homodyne phases are fixed by the
// protocol; the error variance (2, 2, 3, 3) sigma^2 comes from the nullifier
// relations of the cluster-generation step, so only a diagonal surrogate map
// with the same diag(EE^T) is stored here.
inline SchemeRealization cz_four_node() {
  ErrorMap e = Eigen::Vector4d(std::sqrt(2.0), std::sqrt(2.0), std::sqrt(3.0),
                               std::sqrt(3.0))
                   .asDiagonal();
  SchemeRealization r{SchemeId::CzFourNode, cz_matrix(), e, true};
  detail::validate_realization(r);
  return r;
}

// Stage 1 of the two-node-cluster CZ: the joint CZ-and-squeeze action
// diag(sqrt2, sqrt2, 1/sqrt2, 1/sqrt2) * U_CZ with error (0, 0, -y_1, -y_2).
inline std::pair<Eigen::Matrix4d, ErrorMap> cz_stretch_stage1() {
  Eigen::Vector4d d(std::sqrt(2.0), std::sqrt(2.0), 1.0 / std::sqrt(2.0),
                    1.0 / std::sqrt(2.0));
  Eigen::Matrix4d m = d.asDiagonal() * cz_matrix();
  ErrorMap e = ErrorMap::Zero(4, 2);
  e(2, 0) = -1.0;
  e(3, 1) = -1.0;
  return {m, e};
}

// Stage 2: stretching both y-quadratures back with a pair of two-node
// clusters, diag(1/sqrt2, 1/sqrt2, sqrt2, sqrt2) with error sqrt(2) (y_3..y_6).
inline std::pair<Eigen::Matrix4d, ErrorMap> cz_stretch_stage2() {
  Eigen::Vector4d d(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), std::sqrt(2.0),
                    std::sqrt(2.0));
  Eigen::Matrix4d m = d.asDiagonal();
  ErrorMap e = std::sqrt(2.0) * Eigen::Matrix4d::Identity();
  return {m, e};
}

// Composite CZ built from two-node clusters: stage 2 applied after stage 1
// yields the pure CZ with error sqrt(2) (y_3, y_4, y_5 - y_1, y_6 - y_2) over
// ancillas y_1..y_6 and variance (2, 2, 4, 4) sigma^2.
inline SchemeRealization cz_two_node_stretch() {
  const auto [m1, e1] = cz_stretch_stage1();
  const auto [m2, e2] = cz_stretch_stage2();
  ErrorMap e(4, 6);
  e << m2 * e1, e2;
  SchemeRealization r{SchemeId::CzTwoNodeStretch, m2 * m1, e, false};
  detail::validate_realization(r);
  return r;
}

// The single-mode gates applied between beam splitters in the beam-splitter
// CZ scheme, realized on two-node clusters with rotators.
inline Eigen::Matrix2d cz_gate_a() {
  const double a = std::atan(2.0);
  return rotator_realization(SchemePhases::rotator(kPi / 2, a, a)).matrix;
}

inline Eigen::Matrix2d cz_gate_b() {
  const double a = std::atan(2.0);
  return rotator_realization(SchemePhases::rotator(-kPi / 2, -a, a)).matrix;
}

// CZ from two symmetric beam splitters sandwiching the single-mode gates A
// (on the first mixed mode) and B (on the second): BS (A + B) BS = U_CZ.
// Gate errors e_A = sqrt2 (y_2, -y_1) and e_B = sqrt2 (y_4, -y_3) mix through
// the output beam splitter; variance (2, 2, 2, 2) sigma^2, the smallest of
// the three CZ realizations.
inline SchemeRealization cz_beam_splitter() {
  const Eigen::Matrix4d bs = symmetric_beam_splitter();
  Eigen::Matrix4d ab = Eigen::Matrix4d::Identity();
  const Eigen::Matrix2d a = cz_gate_a(), b = cz_gate_b();
  // A acts on (x1, y1), B on (x2, y2) in the (x1, x2, y1, y2) ordering.
  ab(0, 0) = a(0, 0); ab(0, 2) = a(0, 1); ab(2, 0) = a(1, 0); ab(2, 2) = a(1, 1);
  ab(1, 1) = b(0, 0); ab(1, 3) = b(0, 1); ab(3, 1) = b(1, 0); ab(3, 3) = b(1, 1);

  const double s2 = std::sqrt(2.0);
  ErrorMap gate_err(4, 4);  // columns y_1..y_4; rows (x1, x2, y1, y2)
  gate_err << 0, s2, 0, 0,
              0, 0, 0, s2,
              -s2, 0, 0, 0,
              0, 0, -s2, 0;
  SchemeRealization r{SchemeId::CzBeamSplitter, bs * ab * bs, bs * gate_err, false};
  detail::validate_realization(r);
  return r;
}

inline SchemeRealization scheme_realization(SchemeId id, const SchemePhases& phases) {
  switch (id) {
    case SchemeId::FourNode1:
    case SchemeId::FourNode2:
    case SchemeId::FourNode3:
    case SchemeId::FourNode4:
    case SchemeId::FourNode5:
      return four_node_realization(id, phases);
    case SchemeId::TwoNode:
      return two_node_realization(phases);
    case SchemeId::PairTwoNodeCase1:
    case SchemeId::PairTwoNodeCase2:
      return pair_two_node_realization(id, phases);
    case SchemeId::TwoNodeRotator:
      return rotator_realization(phases);
    case SchemeId::CzFourNode:
      phases.require_arity(id);
      return cz_four_node();
    case SchemeId::CzTwoNodeStretch:
      phases.require_arity(id);
      return cz_two_node_stretch();
    case SchemeId::CzBeamSplitter:
      phases.require_arity(id);
      return cz_beam_splitter();
  }
  throw std::invalid_argument("unknown scheme id");
}

// diag(E E^T): per-quadrature variance in units sigma^2 = 1. For CzFourNode
// the surrogate reproduces the known constant exactly.
inline VarianceVector scheme_variance_units(const SchemeRealization& r) {
  return error_map_variance_units(r.error_map);
}

}  // namespace cvqc
