#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <vector>

#include "cvqc/core.hpp"
#include "cvqc/parallel.hpp"
#include "cvqc/schemes.hpp"

namespace cvqc {

// Phases of one four-node configuration in the (theta_plus, theta_3, theta_4)
// parameterization; theta_minus = pi/2 when realizing universal gates.
struct ConfigPhases {
  double theta3;
  double theta4;
  double theta_plus;
};

// Per-configuration phase sets making all five four-node schemes perform the
// same transformation, derived from configuration 3's phases.
struct MatchedPhases {
  std::array<ConfigPhases, 5> config;  // index j-1

  const ConfigPhases& operator[](int j) const { return config.at(j - 1); }
};

// Phase matching across the five configurations. The theta_plus relation for
// configurations 2 and 5 is theta_plus^3 + pi; with the printed pi -
// theta_plus^3 the matrices fail to coincide (see tests).
inline MatchedPhases match_phases(PhaseAngle theta3_3, PhaseAngle theta4_3,
                                  PhaseAngle theta_plus_3) {
  const double t3 = theta3_3.radians(), t4 = theta4_3.radians();
  const double tp = theta_plus_3.radians();
  const double t3r = -std::atan(checked_cot(t3));  // theta_3 of configs 1,4,5
  const double t4r = -std::atan(checked_cot(t4));  // theta_4 of configs 2,4,5
  MatchedPhases m;
  m.config[0] = {t3r, t4, tp - kPi / 2};
  m.config[1] = {t3, t4r, tp + kPi};
  m.config[2] = {t3, t4, tp};
  m.config[3] = {t3r, t4r, tp - kPi / 2};
  m.config[4] = {t3r, t4r, tp + kPi};
  return m;
}

// Four-node homodyne phases (theta_1..theta_4) realizing configuration j of a
// matched set, with theta_minus = pi/2.
inline SchemePhases matched_scheme_phases(const MatchedPhases& m, int j) {
  const ConfigPhases& c = m[j];
  const double theta2 = 0.5 * (c.theta_plus + kPi / 2);
  const double theta1 = 0.5 * (c.theta_plus - kPi / 2);
  return SchemePhases::four_node(theta1, theta2, c.theta3, c.theta4);
}

inline SchemeId four_node_id(int j) {
  return static_cast<SchemeId>(static_cast<int>(SchemeId::FourNode1) + (j - 1));
}

// Transformation matrix of matched configuration j, expressed in
// configuration 3's output quadrature basis. Configurations 2 and 4 emit
// their outputs rotated by +pi/2 and -pi/2 (the quadrature renaming); the
// inverse rotation maps them back so all five coincide entrywise.
inline Eigen::Matrix2d matched_matrix(const MatchedPhases& m, int j) {
  const Eigen::Matrix2d u =
      four_node_realization(four_node_id(j), matched_scheme_phases(m, j)).matrix;
  if (j == 2) return rotation(PhaseAngle(-kPi / 2)) * u;
  if (j == 4) return rotation(PhaseAngle(kPi / 2)) * u;
  return u;
}

// Error variance of matched configuration j in configuration 3's component
// ordering (the quadrature renaming of configs 2 and 4 becomes an x/y swap).
inline VarianceVector matched_variance_units(const MatchedPhases& m, int j) {
  const ConfigPhases& c = m[j];
  const ErrorMap e = detail::four_node_error_map(j, c.theta3, c.theta4);
  VarianceVector v = error_map_variance_units(e);
  if (j == 2 || j == 4) std::swap(v(0), v(1));
  return v;
}

inline double linf_norm(const VarianceVector& v) {
  if (v.size() == 0) throw std::invalid_argument("linf_norm: empty vector");
  return v.cwiseAbs().maxCoeff();
}

// Regular grid over (0, pi)^2: points theta_i = i pi / (n - 1); points within
// `margin` of a pole (0 or pi) are excluded from scans.
struct ScanGrid {
  int n;
  double margin = 1e-6;

  void validate() const {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
    if (!(margin >= 1e-9)) throw std::invalid_argument("grid margin must be >= 1e-9");
  }
  double point(int i) const { return i * kPi / (n - 1); }
  bool excluded(double theta) const { return theta < margin || theta > kPi - margin; }
};

struct ScanRow {
  double theta3;
  double theta4;
  double norm_four_node;
  double norm_pair;
};

inline constexpr double kPairNormUnits = 4.0;  // L-inf of the pair scheme, any phases

struct ScanResult {
  std::vector<ScanRow> rows;  // theta3-major order
  long excluded = 0;
};

// L-inf error surfaces of the four-node and pair schemes over the grid.
inline ScanResult scan_surface(const ScanGrid& grid, int threads = 1) {
  grid.validate();
  std::vector<int> kept;
  kept.reserve(grid.n);
  for (int i = 0; i < grid.n; ++i)
    if (!grid.excluded(grid.point(i))) kept.push_back(i);

  const long rows_per_t3 = static_cast<long>(kept.size());
  ScanResult out;
  out.excluded = static_cast<long>(grid.n) * grid.n - rows_per_t3 * rows_per_t3;
  out.rows.resize(rows_per_t3 * rows_per_t3);

  parallel_for_chunks(rows_per_t3, threads, [&](long begin, long end) {
    for (long a = begin; a < end; ++a) {
      const double t3 = grid.point(kept[a]);
      for (long b = 0; b < rows_per_t3; ++b) {
        const double t4 = grid.point(kept[b]);
        const double nf =
            linf_norm(four_node_variance_closed_form(t3, t4));
        out.rows[a * rows_per_t3 + b] = {t3, t4, nf, kPairNormUnits};
      }
    }
  });
  return out;
}

struct AreaRatioResult {
  double ratio;            // pair_better / four_node_better
  long pair_better;        // cells where the pair norm is strictly smaller
  long four_node_better;   // cells where the four-node norm is strictly smaller
  long ties;
  long excluded;
};

// Area comparison of the two L-inf surfaces, counting grid cells; `surface`
// maps (theta3, theta4) to the four-node-side norm.
template <typename Surface>
AreaRatioResult area_ratio_of(Surface&& surface, const ScanGrid& grid,
                              int threads = 1) {
  grid.validate();
  std::vector<int> kept;
  for (int i = 0; i < grid.n; ++i)
    if (!grid.excluded(grid.point(i))) kept.push_back(i);
  const long k = static_cast<long>(kept.size());

  std::vector<std::array<long, 3>> partial(std::max(1, threads), {0, 0, 0});
  std::atomic<int> next_slot{0};
  parallel_for_chunks(k, threads, [&](long begin, long end) {
    const int slot = next_slot.fetch_add(1);
    auto& acc = partial[slot];
    for (long a = begin; a < end; ++a) {
      const double t3 = grid.point(kept[a]);
      for (long b = 0; b < k; ++b) {
        const double nf = surface(t3, grid.point(kept[b]));
        if (nf < kPairNormUnits) ++acc[0];
        else if (nf > kPairNormUnits) ++acc[1];
        else ++acc[2];
      }
    }
  });
  AreaRatioResult r{0.0, 0, 0, 0, static_cast<long>(grid.n) * grid.n - k * k};
  for (const auto& acc : partial) {
    r.four_node_better += acc[0];
    r.pair_better += acc[1];
    r.ties += acc[2];
  }
  if (r.four_node_better == 0)
    throw std::domain_error("area ratio undefined: empty denominator region");
  r.ratio = static_cast<double>(r.pair_better) / static_cast<double>(r.four_node_better);
  return r;
}

inline AreaRatioResult area_ratio(const ScanGrid& grid, int threads = 1) {
  return area_ratio_of(
      [](double t3, double t4) {
        return linf_norm(four_node_variance_closed_form(t3, t4));
      },
      grid, threads);
}

struct MinResult {
  double value;
  double theta3;
  double theta4;
};

namespace detail {

// Derivative-free simplex (reflection/expansion/contraction/shrink) descent
// clamped to [lo, hi]^2; tolerance 1e-10 on the simplex value spread, at most
// 500 iterations.
template <typename F>
MinResult simplex_refine(F&& f, double t3, double t4, double step, double lo,
                         double hi) {
  auto clamp = [&](std::array<double, 2> p) {
    p[0] = std::clamp(p[0], lo, hi);
    p[1] = std::clamp(p[1], lo, hi);
    return p;
  };
  struct Vertex {
    std::array<double, 2> p;
    double v;
  };
  auto eval = [&](std::array<double, 2> p) { return Vertex{p, f(p[0], p[1])}; };

  std::array<Vertex, 3> s = {
      eval(clamp({t3, t4})),
      eval(clamp({t3 + step, t4})),
      eval(clamp({t3, t4 + step})),
  };
  for (int it = 0; it < 500; ++it) {
    std::sort(s.begin(), s.end(),
              [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    if (s[2].v - s[0].v < 1e-10) break;
    const std::array<double, 2> centroid = {0.5 * (s[0].p[0] + s[1].p[0]),
                                            0.5 * (s[0].p[1] + s[1].p[1])};
    auto along = [&](double c) {
      return clamp({centroid[0] + c * (centroid[0] - s[2].p[0]),
                    centroid[1] + c * (centroid[1] - s[2].p[1])});
    };
    const Vertex reflected = eval(along(1.0));
    if (reflected.v < s[0].v) {
      const Vertex expanded = eval(along(2.0));
      s[2] = expanded.v < reflected.v ? expanded : reflected;
    } else if (reflected.v < s[1].v) {
      s[2] = reflected;
    } else {
      const Vertex contracted = eval(along(-0.5));
      if (contracted.v < s[2].v) {
        s[2] = contracted;
      } else {
        for (int i = 1; i < 3; ++i)
          s[i] = eval(clamp({0.5 * (s[0].p[0] + s[i].p[0]),
                             0.5 * (s[0].p[1] + s[i].p[1])}));
      }
    }
  }
  std::sort(s.begin(), s.end(),
            [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
  return {s[0].v, s[0].p[0], s[0].p[1]};
}

}  // namespace detail

// Grid minimum of f over the non-excluded cells, optionally refined by local
// simplex descent from the best cell.
template <typename F>
MinResult minimize_on_grid(F&& f, const ScanGrid& grid, bool refine) {
  grid.validate();
  MinResult best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int i = 0; i < grid.n; ++i) {
    const double t3 = grid.point(i);
    if (grid.excluded(t3)) continue;
    for (int k = 0; k < grid.n; ++k) {
      const double t4 = grid.point(k);
      if (grid.excluded(t4)) continue;
      const double v = f(t3, t4);
      if (v < best.value) best = {v, t3, t4};
    }
  }
  if (!refine) return best;
  const double step = std::max(kPi / (grid.n - 1), 1e-6);
  return detail::simplex_refine(f, best.theta3, best.theta4, step, grid.margin,
                                kPi - grid.margin);
}

enum class Component { X, Y };

// Minimum of one component of the four-node closed-form variance.
inline MinResult minimize_variance_component(Component component,
                                             const ScanGrid& grid, bool refine) {
  const int idx = component == Component::X ? 0 : 1;
  return minimize_on_grid(
      [idx](double t3, double t4) {
        return four_node_variance_closed_form(t3, t4)(idx);
      },
      grid, refine);
}

}  // namespace cvqc
