#pragma once

#include <json.hpp>

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cvqc/analysis.hpp"
#include "cvqc/compiler.hpp"

namespace cvqc {

// Fixed significant-digit decimal, locale-independent. Values below the
// tight tolerance print as 0 so exact-zero entries stay clean.
inline std::string format_sig(double x, int digits = 12) {
  if (std::abs(x) < kTightTol) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

inline std::string format_fixed9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", x);
  return buf;
}

inline std::string format_vector(const Eigen::VectorXd& v, int digits = 12) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += format_sig(v(i), digits);
  }
  return s;
}

inline nlohmann::json circuit_to_json(const CircuitIR& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::Single) {
      gates.push_back({{"type", "single"},
                       {"mode", g.mode_a},
                       {"matrix",
                        {{g.matrix(0, 0), g.matrix(0, 1)},
                         {g.matrix(1, 0), g.matrix(1, 1)}}}});
    } else {
      gates.push_back({{"type", "cz"}, {"modes", {g.mode_a, g.mode_b}}});
    }
  }
  return {{"modes", c.modes}, {"gates", gates}};
}

inline CircuitIR circuit_from_json(const nlohmann::json& j) {
  CircuitIR c;
  if (!j.is_object() || !j.contains("modes") || !j.contains("gates"))
    throw std::invalid_argument("circuit JSON needs \"modes\" and \"gates\"");
  c.modes = j.at("modes").get<int>();
  for (const auto& jg : j.at("gates")) {
    const std::string type = jg.at("type").get<std::string>();
    if (type == "single") {
      const auto& m = jg.at("matrix");
      if (!m.is_array() || m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
        throw std::invalid_argument("single gate matrix must be 2x2");
      Eigen::Matrix2d mat;
      mat << m[0][0].get<double>(), m[0][1].get<double>(),
             m[1][0].get<double>(), m[1][1].get<double>();
      c.gates.push_back(Gate::single(jg.at("mode").get<int>(), mat));
    } else if (type == "cz") {
      const auto& modes = jg.at("modes");
      if (!modes.is_array() || modes.size() != 2)
        throw std::invalid_argument("cz gate needs \"modes\": [a, b]");
      c.gates.push_back(Gate::cz(modes[0].get<int>(), modes[1].get<int>()));
    } else {
      throw std::invalid_argument("unknown gate type: " + type);
    }
  }
  return c;
}

struct PlanFile {
  std::vector<PlanStep> steps;
  Eigen::VectorXd budget;  // per-quadrature variance at the stored sigma2
  double sigma2 = 0.0;
};

inline nlohmann::json plan_to_json(const PlanFile& p) {
  nlohmann::json steps = nlohmann::json::array();
  for (const PlanStep& s : p.steps) {
    if (s.kind == PlanStep::Kind::TwoNodeGate) {
      steps.push_back({{"type", "two_node_gate"},
                       {"mode", s.mode_a},
                       {"theta_plus", s.phases.theta_plus},
                       {"theta_minus", s.phases.theta_minus},
                       {"rotator_phi", s.phases.phi},
                       {"source", s.source}});
    } else {
      steps.push_back({{"type", "beam_splitter"},
                       {"modes", {s.mode_a, s.mode_b}},
                       {"source", s.source}});
    }
  }
  std::vector<double> budget(p.budget.data(), p.budget.data() + p.budget.size());
  return {{"steps", steps}, {"budget", budget}, {"sigma2", p.sigma2}};
}

inline PlanFile plan_from_json(const nlohmann::json& j) {
  PlanFile p;
  for (const auto& js : j.at("steps")) {
    const std::string type = js.at("type").get<std::string>();
    if (type == "two_node_gate") {
      p.steps.push_back(PlanStep::two_node_gate(
          js.at("mode").get<int>(),
          RotatorPhases{js.at("rotator_phi").get<double>(),
                        js.at("theta_plus").get<double>(),
                        js.at("theta_minus").get<double>()},
          js.at("source").get<int>()));
    } else if (type == "beam_splitter") {
      const auto& modes = js.at("modes");
      p.steps.push_back(PlanStep::beam_splitter(
          modes[0].get<int>(), modes[1].get<int>(), js.at("source").get<int>()));
    } else {
      throw std::invalid_argument("unknown plan step type: " + type);
    }
  }
  const auto budget = j.at("budget").get<std::vector<double>>();
  p.budget = Eigen::Map<const Eigen::VectorXd>(budget.data(),
                                               static_cast<long>(budget.size()));
  p.sigma2 = j.at("sigma2").get<double>();
  return p;
}

// CSV of a surface scan: fixed header, theta3-major rows, 9 decimal places.
// Byte-identical across runs and thread counts.
inline void write_scan_csv(std::ostream& os, std::span<const ScanRow> rows) {
  os << "theta3,theta4,norm_four_node,norm_pair\n";
  for (const ScanRow& r : rows) {
    os << format_fixed9(r.theta3) << ',' << format_fixed9(r.theta4) << ','
       << format_fixed9(r.norm_four_node) << ',' << format_fixed9(r.norm_pair)
       << '\n';
  }
}

}  // namespace cvqc
