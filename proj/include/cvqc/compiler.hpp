#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "cvqc/analysis.hpp"
#include "cvqc/core.hpp"
#include "cvqc/schemes.hpp"
#include "cvqc/symplectic.hpp"

namespace cvqc {

// A gate of the input circuit: an arbitrary single-mode symplectic matrix or
// a CZ between two modes. Mode indices are zero-based.
struct Gate {
  enum class Kind { Single, Cz };

  Kind kind;
  int mode_a;
  int mode_b;             // Cz only
  Eigen::Matrix2d matrix; // Single only

  static Gate single(int mode, const Eigen::Matrix2d& m) {
    return Gate{Kind::Single, mode, -1, m};
  }
  static Gate cz(int a, int b) {
    if (a == b) throw std::invalid_argument("cz needs two distinct modes");
    return Gate{Kind::Cz, a, b, Eigen::Matrix2d::Identity()};
  }
};

struct CircuitIR {
  int modes = 0;
  std::vector<Gate> gates;

  void validate() const {
    if (modes < 1) throw std::invalid_argument("circuit needs at least one mode");
    for (size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = gates[i];
      const std::string where = "gate " + std::to_string(i);
      if (g.mode_a < 0 || g.mode_a >= modes ||
          (g.kind == Gate::Kind::Cz && (g.mode_b < 0 || g.mode_b >= modes)))
        throw std::invalid_argument(where + ": mode index out of range");
      if (g.kind == Gate::Kind::Cz && g.mode_a == g.mode_b)
        throw std::invalid_argument(where + ": cz needs two distinct modes");
      if (g.kind == Gate::Kind::Single) {
        if (!g.matrix.allFinite())
          throw NotSymplecticError(where + ": matrix entries must be finite");
        if (std::abs(g.matrix.determinant() - 1.0) > kMatrixTol)
          throw NotSymplecticError(where + ": not symplectic (det != 1)");
      }
    }
  }
};

// Phases of the rotator-supplemented two-node realization of a single-mode
// gate: U = R(phi - theta_plus/2) M(theta_minus) R(-theta_plus/2).
struct RotatorPhases {
  double phi;
  double theta_plus;
  double theta_minus;

  SchemePhases scheme_phases() const {
    return SchemePhases::rotator(phi, theta_plus, theta_minus);
  }
};

// Inverts the rotator realization through the Euler factors (alpha, s, beta):
// theta_plus = -2 beta, theta_minus = 2 arctan(1/s), phi = alpha - beta.
// Canonical branch: s >= 1, so theta_minus in (0, pi/2]; pure rotations get
// theta_minus = pi/2 (never a degenerate squeeze phase).
inline RotatorPhases decompose_single_mode_gate(const Eigen::Matrix2d& target) {
  const EulerFactors f = euler_decompose(target);
  const double beta = f.beta.radians();
  return RotatorPhases{
      PhaseAngle(f.alpha.radians() - beta).canonical().radians(),
      -2.0 * beta, 2.0 * std::atan(1.0 / f.s)};
}

struct PlanStep {
  enum class Kind { TwoNodeGate, BeamSplitter };

  Kind kind;
  int mode_a;
  int mode_b = -1;          // BeamSplitter only
  RotatorPhases phases{};   // TwoNodeGate only
  int source = 0;           // index of the originating circuit gate

  static PlanStep two_node_gate(int mode, const RotatorPhases& p, int source) {
    return PlanStep{Kind::TwoNodeGate, mode, -1, p, source};
  }
  static PlanStep beam_splitter(int a, int b, int source) {
    return PlanStep{Kind::BeamSplitter, a, b, {}, source};
  }
};

// Single-mode matrix embedded into the 2m-dimensional (x..., y...) ordering.
inline Eigen::MatrixXd embed_single(const Eigen::Matrix2d& m, int mode, int modes) {
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  const int x = mode, y = modes + mode;
  full(x, x) = m(0, 0);
  full(x, y) = m(0, 1);
  full(y, x) = m(1, 0);
  full(y, y) = m(1, 1);
  return full;
}

// Two-mode matrix given on (x_a, x_b, y_a, y_b), embedded likewise.
inline Eigen::MatrixXd embed_pair(const Eigen::Matrix4d& m, int a, int b, int modes) {
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  const int idx[4] = {a, b, modes + a, modes + b};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) full(idx[r], idx[c]) = m(r, c);
  return full;
}

// The minimal-error CZ lowering: mix the two modes, apply the single-mode
// shears A and B on two-node clusters with rotators, mix again.
inline std::vector<PlanStep> lower_cz(const Gate& gate, int source_index = 0) {
  if (gate.kind != Gate::Kind::Cz)
    throw std::invalid_argument("lower_cz expects a cz gate");
  Eigen::Matrix2d a, b;
  a << 1, 0, 1, 1;
  b << 1, 0, -1, 1;
  return {
      PlanStep::beam_splitter(gate.mode_a, gate.mode_b, source_index),
      PlanStep::two_node_gate(gate.mode_a, decompose_single_mode_gate(a), source_index),
      PlanStep::two_node_gate(gate.mode_b, decompose_single_mode_gate(b), source_index),
      PlanStep::beam_splitter(gate.mode_a, gate.mode_b, source_index),
  };
}

inline Eigen::MatrixXd step_matrix(const PlanStep& step, int modes) {
  if (step.kind == PlanStep::Kind::TwoNodeGate) {
    const Eigen::Matrix2d u =
        rotator_realization(step.phases.scheme_phases()).matrix;
    return embed_single(u, step.mode_a, modes);
  }
  return embed_pair(symmetric_beam_splitter(), step.mode_a, step.mode_b, modes);
}

// Composite of the plan; the first listed step acts on the state first.
inline Eigen::MatrixXd plan_matrix(std::span<const PlanStep> plan, int modes) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
  for (const PlanStep& s : plan) acc = step_matrix(s, modes) * acc;
  return acc;
}

// Composite of the circuit's gates (first gate acts first).
inline Eigen::MatrixXd circuit_matrix(const CircuitIR& c) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(2 * c.modes, 2 * c.modes);
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::Single)
      acc = embed_single(g.matrix, g.mode_a, c.modes) * acc;
    else
      acc = embed_pair(cz_matrix(), g.mode_a, g.mode_b, c.modes) * acc;
  }
  return acc;
}

// Concatenated error map of the whole plan: each step's ancilla block,
// propagated through every later step. Columns are ancillas in step order
// (two per two-node gate); estimate_variance of this map cross-checks the
// budget.
inline ErrorMap plan_error_map(std::span<const PlanStep> plan, int modes) {
  const int dim = 2 * modes;
  ErrorMap total(dim, 0);
  for (const PlanStep& s : plan) {
    const Eigen::MatrixXd u = step_matrix(s, modes);
    total = (u * total).eval();
    if (s.kind == PlanStep::Kind::TwoNodeGate) {
      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(dim, 2);
      const Eigen::Matrix2d e =
          std::sqrt(2.0) * rotation(PhaseAngle(s.phases.phi));
      block(s.mode_a, 0) = e(0, 0);
      block(s.mode_a, 1) = e(0, 1);
      block(modes + s.mode_a, 0) = e(1, 0);
      block(modes + s.mode_a, 1) = e(1, 1);
      ErrorMap grown(dim, total.cols() + 2);
      grown << total, block;
      total = std::move(grown);
    }
  }
  return total;
}

// Accumulated input-independent output covariance of a compiled plan and its
// diagonal, in absolute units (already scaled by sigma2).
struct ErrorBudget {
  Eigen::MatrixXd covariance;
  VarianceVector variance_vector;
};

struct CompileResult {
  std::vector<PlanStep> plan;
  ErrorBudget budget;
};

// Compiles a Gaussian circuit into the minimal-error realization: two-node
// clusters with rotators for single-mode gates, the beam-splitter scheme for
// CZ. Gates keep source order; the budget is exact forward propagation
// Sigma <- U Sigma U^T + sigma2 E E^T per step.
inline CompileResult compile_circuit(const CircuitIR& c, SqueezeVariance sigma2) {
  c.validate();
  CompileResult out;
  for (size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == Gate::Kind::Single) {
      out.plan.push_back(PlanStep::two_node_gate(
          g.mode_a, decompose_single_mode_gate(g.matrix), static_cast<int>(i)));
    } else {
      for (PlanStep& s : lower_cz(g, static_cast<int>(i)))
        out.plan.push_back(s);
    }
  }

  const int dim = 2 * c.modes;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(dim, dim);
  for (const PlanStep& s : out.plan) {
    const Eigen::MatrixXd u = step_matrix(s, c.modes);
    sigma = u * sigma * u.transpose();
    if (s.kind == PlanStep::Kind::TwoNodeGate) {
      // sqrt(2) R(phi) ancilla noise: E E^T = 2 I on the mode's quadratures.
      sigma(s.mode_a, s.mode_a) += 2.0 * sigma2.value();
      sigma(c.modes + s.mode_a, c.modes + s.mode_a) += 2.0 * sigma2.value();
    }
  }
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  out.budget = ErrorBudget{sigma, sigma.diagonal()};
  return out;
}

inline double budget_norm(const ErrorBudget& b) {
  return linf_norm(b.variance_vector);
}

}  // namespace cvqc
