#include "cvqc/schemes.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"

using namespace cvqc;
using cvqc::testing::expect_near;
using cvqc::testing::PhaseGen;
using cvqc::testing::representative_phases;

namespace {

SchemePhases four_node_from_pm(double tp, double tm, double t3, double t4) {
  return SchemePhases::four_node(0.5 * (tp - tm), 0.5 * (tp + tm), t3, t4);
}

}  // namespace

TEST(SchemeEnum, NamesRoundTrip) {
  for (SchemeId id : all_schemes())
    EXPECT_EQ(scheme_from_string(to_string(id)), id);
  EXPECT_THROW(scheme_from_string("FourNode6"), std::invalid_argument);
}

TEST(SchemePhasesType, ArityEnforced) {
  EXPECT_THROW(two_node_realization(SchemePhases::rotator(0, 0, 1)),
               std::invalid_argument);
  EXPECT_THROW(four_node_realization(SchemeId::FourNode1,
                                     SchemePhases::two_node(0, 1)),
               std::invalid_argument);
}

TEST(FourNode, SquareClusterSubstitutionExample) {
  // theta_1 = -pi/4, theta_2 = pi/4 gives theta_plus = 0, theta_minus = pi/2;
  // tan(pi/4) = 1 collapses the inner matrix to [[0, -1], [1, -1]].
  const auto r = four_node_realization(
      SchemeId::FourNode5,
      SchemePhases::four_node(-kPi / 4, kPi / 4, kPi / 4, kPi / 4));
  Eigen::Matrix2d expected;
  expected << 0, -1, 1, -1;
  expect_near(r.matrix, expected, 1e-12);
}

TEST(FourNode, Config3IdentityExample) {
  const auto r = four_node_realization(
      SchemeId::FourNode3, four_node_from_pm(0.0, kPi / 2, kPi / 2, kPi / 2));
  expect_near(r.matrix, Eigen::Matrix2d::Identity(), 1e-12);
}

TEST(FourNode, DeterminantOneAcrossRandomPhases) {
  PhaseGen gen(21);
  for (int j = 0; j < 5; ++j) {
    const SchemeId id = static_cast<SchemeId>(static_cast<int>(SchemeId::FourNode1) + j);
    for (int i = 0; i < 1000; ++i) {
      const auto r = four_node_realization(
          id, four_node_from_pm(gen.any_angle(), gen.interior(), gen.interior(),
                                gen.interior()));
      EXPECT_NEAR(r.matrix.determinant(), 1.0, 1e-9);
      EXPECT_EQ(r.error_map.cols(), 4);
    }
  }
}

TEST(FourNode, SingularPhasesRejected) {
  // config 3 uses cot(theta_3): a pole at 0.
  EXPECT_THROW(four_node_realization(
                   SchemeId::FourNode3, four_node_from_pm(0.0, kPi / 2, 0.0, kPi / 2)),
               SingularPhaseError);
  // config 5 uses tan(theta_3): a pole at pi/2.
  EXPECT_THROW(four_node_realization(
                   SchemeId::FourNode5,
                   four_node_from_pm(0.0, kPi / 2, kPi / 2, kPi / 4)),
               SingularPhaseError);
  // degenerate squeeze phase theta_minus = 0
  EXPECT_THROW(four_node_realization(
                   SchemeId::FourNode3, four_node_from_pm(0.3, 0.0, kPi / 2, kPi / 2)),
               SingularPhaseError);
}

TEST(VarianceFromErrorMap, DiagonalAndZeroCases) {
  const ErrorMap e = std::sqrt(2.0) * Eigen::Matrix2d::Identity();
  const VarianceVector v = variance_from_error_map(e, SqueezeVariance(0.05));
  EXPECT_NEAR(v(0), 0.1, 1e-15);
  EXPECT_NEAR(v(1), 0.1, 1e-15);

  const VarianceVector z =
      variance_from_error_map(ErrorMap::Zero(2, 4), SqueezeVariance(0.05));
  EXPECT_DOUBLE_EQ(z.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FourNode, Config3VarianceByHandPropagation) {
  // Oracle: propagate the symmetric-point prefactor rows through the
  // d1-matrix by hand. At theta_3 = theta_4 = pi/2 all cot factors vanish,
  // the prefactor is [[1,0,0,-2],[0,1,-2,0]], and each row's squared norm is
  // (d1+2)^2 + (1-2 d1)^2 = 75 + 30 sqrt5 = 3 d2^2.
  const double rownorm2 = (kD1 + 2.0) * (kD1 + 2.0) + (1.0 - 2.0 * kD1) * (1.0 - 2.0 * kD1);
  EXPECT_NEAR(rownorm2 / (kD2 * kD2), 3.0, 1e-12);

  const auto r = four_node_realization(
      SchemeId::FourNode3, four_node_from_pm(0.0, kPi / 2, kPi / 2, kPi / 2));
  const VarianceVector v = scheme_variance_units(r);
  EXPECT_NEAR(v(0), 3.0, 1e-12);
  EXPECT_NEAR(v(1), 3.0, 1e-12);
}

TEST(ClosedForm, SubstitutionExamples) {
  const VarianceVector center = four_node_variance_closed_form(kPi / 2, kPi / 2);
  EXPECT_NEAR(center(0), 3.0, 1e-12);
  EXPECT_NEAR(center(1), 3.0, 1e-12);

  const VarianceVector off = four_node_variance_closed_form(kPi / 4, kPi / 2);
  EXPECT_NEAR(off(0), 3.0, 1e-12);
  EXPECT_NEAR(off(1), 5.0, 1e-12);
}

TEST(ClosedForm, CotangentSignSymmetry) {
  PhaseGen gen(22);
  for (int i = 0; i < 200; ++i) {
    const double t3 = gen.interior(), t4 = gen.interior();
    expect_near(four_node_variance_closed_form(kPi - t3, kPi - t4),
                four_node_variance_closed_form(t3, t4), 1e-9);
  }
}

TEST(ClosedForm, SingularPhaseRejected) {
  EXPECT_THROW(four_node_variance_closed_form(0.0, kPi / 2), SingularPhaseError);
  EXPECT_THROW(four_node_variance_closed_form(kPi / 2, kPi), SingularPhaseError);
}

TEST(TwoNode, IdentityPhasesAndVariance) {
  const auto r = two_node_realization(SchemePhases::two_node(0.0, kPi / 2));
  expect_near(r.matrix, Eigen::Matrix2d::Identity(), 1e-12);
  const VarianceVector v = variance_from_error_map(r.error_map, SqueezeVariance(0.05));
  EXPECT_NEAR(v(0), 0.1, 1e-15);
  EXPECT_NEAR(v(1), 0.1, 1e-15);
}

TEST(TwoNode, StretchPhase) {
  const auto r =
      two_node_realization(SchemePhases::two_node(0.0, 2.0 * std::atan(std::sqrt(2.0))));
  Eigen::Matrix2d expected;
  expected << std::pow(2.0, -0.5), 0, 0, std::pow(2.0, 0.5);
  expect_near(r.matrix, expected, 1e-12);
}

TEST(TwoNode, RotationAnglesAlwaysCoincide) {
  // The transformation is R(-tp/2) M R(-tp/2): both rotation factors carry
  // the same angle, which is what keeps the bare scheme short of universality.
  PhaseGen gen(23);
  for (int i = 0; i < 200; ++i) {
    const double tp = gen.any_angle(), tm = gen.interior();
    const auto r = two_node_realization(SchemePhases::two_node(tp, tm));
    const Eigen::Matrix2d half = rotation(PhaseAngle(-0.5 * tp));
    expect_near(r.matrix, half * measurement_gate(PhaseAngle(tm)) * half, 1e-12);
  }
}

TEST(PairTwoNode, CaseTwoVarianceConstant) {
  PhaseGen gen(24);
  for (int i = 0; i < 200; ++i) {
    const auto r = pair_two_node_realization(
        SchemeId::PairTwoNodeCase2,
        SchemePhases::pair(gen.any_angle(), gen.interior(), gen.any_angle(), 0.0));
    const VarianceVector v = scheme_variance_units(r);
    EXPECT_NEAR(v(0), 4.0, 1e-12);
    EXPECT_NEAR(v(1), 4.0, 1e-12);
  }
}

TEST(PairTwoNode, CaseOneSubstitutionExample) {
  // (4 / sin^2 tm)(1 +- cos tp cos tm) at tm = pi/3, tp = 0: (8, 8/3).
  const auto r = pair_two_node_realization(
      SchemeId::PairTwoNodeCase1, SchemePhases::pair(0.0, 0.0, 0.0, kPi / 3));
  const VarianceVector v = scheme_variance_units(r);
  EXPECT_NEAR(v(0), 8.0, 1e-12);
  EXPECT_NEAR(v(1), 8.0 / 3.0, 1e-12);
}

TEST(PairTwoNode, CaseOneVarianceFormula) {
  PhaseGen gen(25);
  for (int i = 0; i < 300; ++i) {
    const double tp2 = gen.any_angle(), tm2 = gen.interior();
    const auto r = pair_two_node_realization(
        SchemeId::PairTwoNodeCase1, SchemePhases::pair(0.4, 0.0, tp2, tm2));
    const VarianceVector v = scheme_variance_units(r);
    const double common = 4.0 / (std::sin(tm2) * std::sin(tm2));
    EXPECT_NEAR(v(0), common * (1.0 + std::cos(tp2) * std::cos(tm2)), 1e-9);
    EXPECT_NEAR(v(1), common * (1.0 - std::cos(tp2) * std::cos(tm2)), 1e-9);
  }
}

TEST(PairTwoNode, CaseOneMinimumAtRightAngle) {
  const auto r = pair_two_node_realization(
      SchemeId::PairTwoNodeCase1, SchemePhases::pair(0.1, 0.0, 0.7, kPi / 2));
  const VarianceVector v = scheme_variance_units(r);
  EXPECT_NEAR(v(0), 4.0, 1e-12);
  EXPECT_NEAR(v(1), 4.0, 1e-12);
}

TEST(Rotator, KnownShearGateParameters) {
  const double a = std::atan(2.0);
  const auto ga = rotator_realization(SchemePhases::rotator(kPi / 2, a, a));
  Eigen::Matrix2d expect_a;
  expect_a << 1, 0, 1, 1;
  expect_near(ga.matrix, expect_a, 1e-12);

  // The negative-phase parameter set requires the signed-tangent gate.
  const auto gb = rotator_realization(SchemePhases::rotator(kPi / 2, -a, -a));
  Eigen::Matrix2d expect_b;
  expect_b << 1, 0, -1, 1;
  expect_near(gb.matrix, expect_b, 1e-12);
}

TEST(Rotator, ZeroAngleReducesToTwoNode) {
  PhaseGen gen(26);
  for (int i = 0; i < 100; ++i) {
    const double tp = gen.any_angle(), tm = gen.interior();
    expect_near(rotator_realization(SchemePhases::rotator(0.0, tp, tm)).matrix,
                two_node_realization(SchemePhases::two_node(tp, tm)).matrix, 1e-12);
  }
}

TEST(Rotator, VarianceInvariantUnderRotation) {
  PhaseGen gen(27);
  for (int i = 0; i < 200; ++i) {
    const auto r = rotator_realization(
        SchemePhases::rotator(gen.any_angle(), gen.any_angle(), gen.interior()));
    const VarianceVector v = scheme_variance_units(r);
    EXPECT_NEAR(v(0), 2.0, 1e-12);
    EXPECT_NEAR(v(1), 2.0, 1e-12);
  }
}

TEST(CzFourNode, MatrixActionAndConstants) {
  const auto r = cz_four_node();
  EXPECT_TRUE(r.surrogate_error_map);
  const Eigen::Vector4d out = r.matrix * Eigen::Vector4d(1, 2, 0, 0);
  expect_near(out, Eigen::Vector4d(1, 2, 2, 1), 1e-15);

  EXPECT_LE(symplectic_defect(r.matrix), 1e-12);

  const VarianceVector v = variance_from_error_map(r.error_map, SqueezeVariance(0.05));
  expect_near(v, Eigen::Vector4d(0.1, 0.1, 0.15, 0.15), 1e-15);
  expect_near(scheme_variance_units(r), cz_four_node_variance(), 1e-15);
}

TEST(CzStretch, StageOneMatchesJointAction) {
  const auto [m1, e1] = cz_stretch_stage1();
  Eigen::Vector4d d(std::sqrt(2.0), std::sqrt(2.0), 1.0 / std::sqrt(2.0),
                    1.0 / std::sqrt(2.0));
  expect_near(m1, Eigen::Matrix4d(d.asDiagonal() * cz_matrix()), 1e-15);
  EXPECT_EQ(e1.cols(), 2);
}

TEST(CzStretch, CompositeIsPureCz) {
  const auto r = cz_two_node_stretch();
  expect_near(r.matrix, cz_matrix(), 1e-12);
  expect_near(scheme_variance_units(r), Eigen::Vector4d(2, 2, 4, 4), 1e-12);
  EXPECT_EQ(r.error_map.cols(), 6);

  // The stored map is the stage-2 stretch applied to the stage-1 error plus
  // the stage-2 ancillas.
  const auto [m1, e1] = cz_stretch_stage1();
  const auto [m2, e2] = cz_stretch_stage2();
  ErrorMap expected(4, 6);
  expected << m2 * e1, e2;
  expect_near(r.error_map, expected, 1e-15);
}

TEST(CzBeamSplitter, CompositeAndErrorRows) {
  const auto r = cz_beam_splitter();
  expect_near(r.matrix, cz_matrix(), 1e-12);

  // Rows (y2+y4, y2-y4, -y1-y3, -y1+y3) over ancillas y_1..y_4.
  ErrorMap rows(4, 4);
  rows << 0, 1, 0, 1,
          0, 1, 0, -1,
          -1, 0, -1, 0,
          -1, 0, 1, 0;
  expect_near(r.error_map, rows, 1e-12);
  expect_near(scheme_variance_units(r), Eigen::Vector4d(2, 2, 2, 2), 1e-12);
}

TEST(CzSchemes, LinfOrdering) {
  const double bs = scheme_variance_units(cz_beam_splitter()).maxCoeff();
  const double four = scheme_variance_units(cz_four_node()).maxCoeff();
  const double stretch = scheme_variance_units(cz_two_node_stretch()).maxCoeff();
  EXPECT_NEAR(bs, 2.0, 1e-12);
  EXPECT_NEAR(four, 3.0, 1e-12);
  EXPECT_NEAR(stretch, 4.0, 1e-12);
  EXPECT_LT(bs, four);
  EXPECT_LT(four, stretch);
}

TEST(SingleModeSchemes, DeterminantOneAcrossRandomPhases) {
  PhaseGen gen(29);
  for (int i = 0; i < 300; ++i) {
    const double tp = gen.any_angle(), tm = gen.interior();
    EXPECT_NEAR(
        two_node_realization(SchemePhases::two_node(tp, tm)).matrix.determinant(),
        1.0, 1e-9);
    EXPECT_NEAR(rotator_realization(SchemePhases::rotator(gen.any_angle(), tp, tm))
                    .matrix.determinant(),
                1.0, 1e-9);
    EXPECT_NEAR(pair_two_node_realization(
                    SchemeId::PairTwoNodeCase1,
                    SchemePhases::pair(gen.any_angle(), 0.0, tp, tm))
                    .matrix.determinant(),
                1.0, 1e-9);
    EXPECT_NEAR(pair_two_node_realization(
                    SchemeId::PairTwoNodeCase2,
                    SchemePhases::pair(tp, tm, gen.any_angle(), 0.0))
                    .matrix.determinant(),
                1.0, 1e-9);
  }
}

TEST(AllSchemes, SymplecticAndAncillaCounts) {
  PhaseGen gen(28);
  for (SchemeId id : all_schemes()) {
    const auto r = scheme_realization(id, representative_phases(id));
    EXPECT_EQ(r.matrix.rows(), 2 * scheme_mode_count(id)) << to_string(id);
    EXPECT_EQ(r.error_map.cols(), scheme_ancilla_count(id)) << to_string(id);
    if (r.matrix.rows() == 2)
      EXPECT_NEAR(r.matrix.determinant(), 1.0, 1e-9) << to_string(id);
    else
      EXPECT_LE(symplectic_defect(r.matrix), 1e-9) << to_string(id);
  }
}
