// cvqc: scheme inspection, error-surface scans, area ratios, Monte-Carlo
// validation, and Gaussian-circuit compilation on two-node cluster states.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "cvqc/analysis.hpp"
#include "cvqc/compiler.hpp"
#include "cvqc/core.hpp"
#include "cvqc/montecarlo.hpp"
#include "cvqc/schemes.hpp"
#include "cvqc/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

cvqc::SqueezeVariance parse_sigma2(double value) {
  try {
    return cvqc::SqueezeVariance(value);
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());  // flag validation -> usage error
  }
}

// Phase arguments as the CLI takes them. Four-node schemes are entered in
// the (theta_plus, theta_minus, theta_3, theta_4) parameterization used by
// every other scheme; internally theta_1/theta_2 = (theta_plus -+
// theta_minus)/2.
cvqc::SchemePhases phases_from_args(cvqc::SchemeId id, const std::vector<double>& args) {
  const int arity = cvqc::scheme_phase_arity(id);
  if (static_cast<int>(args.size()) != arity)
    throw std::invalid_argument(std::string(cvqc::to_string(id)) + " takes " +
                                std::to_string(arity) + " phase argument(s), got " +
                                std::to_string(args.size()));
  if (cvqc::is_four_node(id)) {
    const double tp = args[0], tm = args[1];
    return cvqc::SchemePhases::four_node(0.5 * (tp - tm), 0.5 * (tp + tm),
                                         args[2], args[3]);
  }
  std::vector<cvqc::PhaseAngle> theta;
  theta.reserve(args.size());
  for (double a : args) theta.emplace_back(a);
  return cvqc::SchemePhases(std::move(theta));
}

void print_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << cvqc::format_sig(m(r, c));
    }
    os << '\n';
  }
}

int cmd_scheme(const std::string& name, const std::vector<double>& phase_args) {
  const cvqc::SchemeId id = cvqc::scheme_from_string(name);
  const cvqc::SchemeRealization r =
      cvqc::scheme_realization(id, phases_from_args(id, phase_args));
  std::cout << "scheme: " << cvqc::to_string(id) << '\n' << "matrix:\n";
  print_matrix(std::cout, r.matrix);
  std::cout << "variance: " << cvqc::format_vector(cvqc::scheme_variance_units(r));
  if (r.surrogate_error_map) std::cout << "  (diagonal surrogate map)";
  std::cout << '\n';
  return kExitOk;
}

int cmd_scan(int grid, double margin, const std::string& out, int threads) {
  const cvqc::ScanResult result = cvqc::scan_surface({grid, margin}, threads);
  if (out.empty() || out == "-") {
    cvqc::write_scan_csv(std::cout, result.rows);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + out);
    cvqc::write_scan_csv(f, result.rows);
    if (!f.good()) throw IoError("write failed: " + out);
  }
  std::cerr << "rows: " << result.rows.size() << ", excluded cells: " << result.excluded
            << '\n';
  return kExitOk;
}

int cmd_area_ratio(int grid, double margin, int threads, bool reversed) {
  const cvqc::AreaRatioResult r = cvqc::area_ratio({grid, margin}, threads);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", reversed ? 1.0 / r.ratio : r.ratio);
  std::cout << (reversed ? "S1/S2 = " : "S2/S1 = ") << buf << '\n'
            << "S2 (pair scheme better): " << r.pair_better << '\n'
            << "S1 (four-node scheme better): " << r.four_node_better << '\n'
            << "ties: " << r.ties << ", excluded cells: " << r.excluded << '\n';
  return kExitOk;
}

int cmd_compile(const std::string& circuit_path, const std::string& out,
                double sigma2_value) {
  const cvqc::SqueezeVariance sigma2 = parse_sigma2(sigma2_value);
  std::ifstream f(circuit_path);
  if (!f) throw IoError("cannot read circuit file: " + circuit_path);
  nlohmann::json j;
  f >> j;  // json::parse_error reports line/column

  const cvqc::CircuitIR circuit = cvqc::circuit_from_json(j);
  const cvqc::CompileResult result = cvqc::compile_circuit(circuit, sigma2);
  const cvqc::PlanFile plan{result.plan, result.budget.variance_vector,
                            sigma2.value()};
  const std::string plan_text = cvqc::plan_to_json(plan).dump(2) + "\n";

  std::ostream& info = (out.empty() || out == "-") ? std::cerr : std::cout;
  info << "budget: " << cvqc::format_vector(result.budget.variance_vector) << '\n'
       << "linf: " << cvqc::format_sig(cvqc::budget_norm(result.budget)) << '\n';
  if (out.empty() || out == "-") {
    std::cout << plan_text;
  } else {
    std::ofstream pf(out, std::ios::binary);
    if (!pf) throw IoError("cannot open for writing: " + out);
    pf << plan_text;
    if (!pf.good()) throw IoError("write failed: " + out);
    info << "plan written to " << out << '\n';
  }
  return kExitOk;
}

int cmd_validate(const std::string& name, const std::vector<double>& phase_args,
                 long trials, std::uint64_t seed, double sigma2_value,
                 const std::vector<double>& expect, int threads) {
  const cvqc::SqueezeVariance sigma2 = parse_sigma2(sigma2_value);
  const cvqc::SchemeId id = cvqc::scheme_from_string(name);
  const cvqc::SchemeRealization r =
      cvqc::scheme_realization(id, phases_from_args(id, phase_args));

  Eigen::VectorXd analytic =
      cvqc::variance_from_error_map(r.error_map, sigma2);
  if (!expect.empty()) {
    if (expect.size() != static_cast<size_t>(analytic.size()))
      throw std::invalid_argument("--expect needs " + std::to_string(analytic.size()) +
                                  " values");
    for (Eigen::Index i = 0; i < analytic.size(); ++i)
      analytic(i) = expect[i] * sigma2.value();
  }

  const cvqc::SampleConfig cfg(trials, seed, sigma2);
  const Eigen::VectorXd empirical = cvqc::estimate_variance(r.error_map, cfg, threads);
  const double tol = cvqc::statistical_tolerance(trials);

  std::cout << "scheme: " << cvqc::to_string(id) << ", sigma2: "
            << cvqc::format_sig(sigma2.value()) << ", trials: " << trials
            << ", seed: " << seed << '\n'
            << "analytic:  " << cvqc::format_vector(analytic) << '\n'
            << "empirical: " << cvqc::format_vector(empirical) << '\n'
            << "tolerance: " << cvqc::format_sig(100.0 * tol, 4) << "% relative\n";
  bool ok = true;
  for (Eigen::Index i = 0; i < analytic.size(); ++i)
    ok = ok && std::abs(empirical(i) - analytic(i)) <= tol * analytic(i);
  std::cout << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian cluster-computation schemes: exact transformation\n"
               "matrices, error budgets, scheme comparison, and compilation\n"
               "onto two-node clusters with rotators."};
  app.require_subcommand(1);

  std::string scheme_name;
  std::vector<double> phase_args;
  auto* scheme = app.add_subcommand(
      "scheme", "Print a scheme's transformation matrix and error variance "
                "(variance in units of sigma2)");
  scheme->add_option("id", scheme_name, "Scheme identifier, e.g. TwoNodeRotator")
      ->required();
  scheme->add_option(
      "phases", phase_args,
      "Scheme phases in radians. FourNode*: theta_plus theta_minus theta3 "
      "theta4; TwoNode: theta_plus theta_minus; PairTwoNodeCase*: plus1 "
      "minus1 plus2 minus2 (the pinned minus slot is ignored); "
      "TwoNodeRotator: phi theta_plus theta_minus; Cz*: none");

  int grid = 1001;
  double margin = 1e-6;
  std::string out_path;
  int threads = 1;
  auto* scan = app.add_subcommand("scan", "CSV of the four-node vs pair L-inf "
                                          "error surfaces over (0, pi)^2");
  scan->add_option("--grid", grid, "Points per axis")->capture_default_str();
  scan->add_option("--margin", margin, "Pole exclusion margin, radians")
      ->capture_default_str();
  scan->add_option("--out", out_path, "Output path (default stdout)");
  scan->add_option("--threads", threads, "Worker threads")->capture_default_str();

  int ar_grid = 1001;
  double ar_margin = 1e-6;
  int ar_threads = 1;
  bool reversed = false;
  auto* area = app.add_subcommand(
      "area-ratio", "Ratio of the (theta3, theta4) areas where each scheme "
                    "has the smaller L-inf error");
  area->add_option("--grid", ar_grid, "Points per axis (>= 500)")
      ->capture_default_str();
  area->add_option("--margin", ar_margin, "Pole exclusion margin, radians")
      ->capture_default_str();
  area->add_option("--threads", ar_threads, "Worker threads")->capture_default_str();
  area->add_flag("--reversed", reversed, "Print S1/S2 instead of S2/S1");

  std::string circuit_path, plan_path;
  double sigma2 = 0.05;
  auto* compile = app.add_subcommand(
      "compile", "Compile a circuit JSON into two-node-cluster steps with an "
                 "exact error budget");
  compile->add_option("circuit", circuit_path, "Circuit JSON file")->required();
  compile->add_option("--out", plan_path, "Plan JSON path (default stdout)");
  compile->add_option("--sigma2", sigma2, "Ancilla squeeze variance")
      ->capture_default_str();

  std::string v_name;
  std::vector<double> v_phases;
  long trials = 1000000;
  std::uint64_t seed = 0;
  double v_sigma2 = 0.05;
  int v_threads = 1;
  std::vector<double> expect;
  auto* validate = app.add_subcommand(
      "validate", "Monte-Carlo check of a scheme's analytic error variance");
  validate->add_option("id", v_name, "Scheme identifier")->required();
  validate->add_option("phases", v_phases, "Scheme phases (see `scheme`)");
  validate->add_option("--trials", trials, "Sample count")->capture_default_str();
  validate->add_option("--seed", seed, "Random seed")->capture_default_str();
  validate->add_option("--sigma2", v_sigma2, "Ancilla squeeze variance")
      ->capture_default_str();
  validate->add_option("--threads", v_threads, "Worker threads")
      ->capture_default_str();
  validate->add_option("--expect", expect,
                       "Override the expected variance vector (units sigma2; "
                       "testing hook)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (scheme->parsed()) return cmd_scheme(scheme_name, phase_args);
    if (scan->parsed()) return cmd_scan(grid, margin, out_path, threads);
    if (area->parsed()) {
      if (ar_grid < 500)
        throw std::invalid_argument("area-ratio needs --grid >= 500");
      return cmd_area_ratio(ar_grid, ar_margin, ar_threads, reversed);
    }
    if (compile->parsed()) return cmd_compile(circuit_path, plan_path, sigma2);
    if (validate->parsed())
      return cmd_validate(v_name, v_phases, trials, seed, v_sigma2, expect,
                          v_threads);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
