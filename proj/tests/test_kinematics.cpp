#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "aerobat/angles.hpp"
#include "aerobat/errors.hpp"
#include "aerobat/kinematics/fit.hpp"
#include "aerobat/kinematics/gait.hpp"
#include "aerobat/kinematics/linkage.hpp"
#include "aerobat/kinematics/optimizer.hpp"
#include "aerobat/kinematics/simplex.hpp"

using namespace aerobat;
using namespace aerobat::kinematics;

TEST(TargetGait, ElbowSpansSeventyFiveToOneSixtyFive) {
  double lo = 1e9, hi = -1e9;
  for (const auto& t : sample_target_gait(3600)) {
    lo = std::min(lo, t.theta_e_hat);
    hi = std::max(hi, t.theta_e_hat);
  }
  EXPECT_NEAR(rad2deg(lo), 75.0, 1e-3);
  EXPECT_NEAR(rad2deg(hi), 165.0, 1e-3);
}

TEST(TargetGait, ShoulderIsOffsetSinusoid) {
  for (double phi : {0.0, 0.7, 2.0, 5.5})
    EXPECT_NEAR(target_gait(phi).theta_s_hat, deg2rad(35.0) * std::sin(phi) - deg2rad(10.0), 1e-12);
}

TEST(TargetGait, PhaseIsWrapped) {
  const auto a = target_gait(1.0), b = target_gait(1.0 + kTwoPi);
  EXPECT_NEAR(a.theta_s_hat, b.theta_s_hat, 1e-12);
  EXPECT_NEAR(a.theta_e_hat, b.theta_e_hat, 1e-12);
}

TEST(RSquared, PerfectFitIsOne) {
  const std::vector<double> y = {1, 2, 4, 3};
  EXPECT_DOUBLE_EQ(r_squared(y, y), 1.0);
}

TEST(RSquared, MeanPredictionIsZero) {
  const std::vector<double> y = {1, 2, 3, 4}, m = {2.5, 2.5, 2.5, 2.5};
  EXPECT_NEAR(r_squared(m, y), 0.0, 1e-15);
}

TEST(RSquared, Errors) {
  const std::vector<double> a = {1, 2}, b = {1, 2, 3}, flat = {2, 2, 2};
  EXPECT_THROW(r_squared(a, b), std::invalid_argument);
  EXPECT_THROW(r_squared(b, flat), DegenerateTarget);
}

TEST(CircleIntersection, MatchesAnalyticLens) {
  // Circles of radius 5 centred 6 apart meet at (3, +-4).
  const auto up = circle_intersection({0, 0}, 5, {6, 0}, 5, 1);
  const auto down = circle_intersection({0, 0}, 5, {6, 0}, 5, -1);
  ASSERT_TRUE(up && down);
  EXPECT_NEAR(std::abs(up->y()), 4.0, 1e-12);
  EXPECT_NEAR(up->x(), 3.0, 1e-12);
  EXPECT_NEAR(up->y(), -down->y(), 1e-12);
  EXPECT_FALSE(circle_intersection({0, 0}, 1, {5, 0}, 1, 1));
}

TEST(CircleIntersection, RandomPointsLieOnBothCircles) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 c0(u(rng), u(rng)), c1(u(rng), u(rng));
    const double d = (c1 - c0).norm();
    const double r0 = 0.2 + std::abs(u(rng)), r1 = std::max(std::abs(r0 - d) + 0.01, 0.5 * (r0 + d));
    const auto p = circle_intersection(c0, r0, c1, r1, 1);
    if (!p) continue;
    EXPECT_NEAR((*p - c0).norm(), r0, 1e-9);
    EXPECT_NEAR((*p - c1).norm(), r1, 1e-9);
  }
}

TEST(Linkage, SweepPreservesLinkLengths) {
  const LinkageDesign d;
  for (const auto& s : sweep_cycle(d, 360)) EXPECT_LT(max_link_length_error(d, s), 1e-9);
}

TEST(Linkage, DefaultDesignFlapsAndFolds) {
  double s_lo = 1e9, s_hi = -1e9, e_lo = 1e9, e_hi = -1e9;
  for (const auto& s : sweep_cycle(LinkageDesign{}, 360)) {
    s_lo = std::min(s_lo, wrap_pi(s.theta_s));
    s_hi = std::max(s_hi, wrap_pi(s.theta_s));
    e_lo = std::min(e_lo, s.theta_e);
    e_hi = std::max(e_hi, s.theta_e);
  }
  EXPECT_GT(rad2deg(s_hi - s_lo), 40.0);
  EXPECT_GT(rad2deg(e_hi - e_lo), 40.0);
  EXPECT_LT(rad2deg(e_hi), 180.0);
}

TEST(Linkage, CrankIsGearedDownFromMotor) {
  const LinkageDesign d;
  EXPECT_NEAR(motor_to_crank(d, 75.0 * kTwoPi), kTwoPi, 1e-12);
}

TEST(Linkage, UnreachableCouplerThrows) {
  LinkageDesign d;
  d.coupler_lengths.elbow_coupler = 0.5;
  EXPECT_THROW(forward_kinematics(d, 0.0), AssemblyError);
}

TEST(Simplex, MinimizesShiftedQuadratic) {
  const Eigen::Vector3d target(0.2, 0.7, 0.4);
  auto f = [&](const Eigen::VectorXd& x) { return (x - target).squaredNorm(); };
  const auto r = nelder_mead(f, Eigen::VectorXd::Constant(3, 0.5));
  EXPECT_LT((r.x - target).norm(), 1e-5);
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
}

TEST(Simplex, StaysInsideBox) {
  auto f = [](const Eigen::VectorXd& x) {
    EXPECT_TRUE((x.array() >= 0.0).all() && (x.array() <= 1.0).all());
    return -x.sum();
  };
  const auto r = nelder_mead(f, Eigen::VectorXd::Constant(2, 0.5));
  EXPECT_NEAR(r.value, -2.0, 1e-6);
}

TEST(Optimizer, VectorRoundTrip) {
  const LinkageDesign d;
  const auto back = vector_to_design(design_to_vector(d), d);
  EXPECT_EQ(design_to_vector(back), design_to_vector(d));
}

TEST(Optimizer, InfeasibleBoxThrows) {
  auto b = DesignBounds::defaults();
  b.lower[4] = b.upper[4] = 0.5;  // elbow coupler far too long to close
  OptimizerOptions o;
  o.starts = 1;
  o.evaluations_per_start = 10;
  EXPECT_THROW(optimize_linkage(LinkageDesign{}, sample_target_gait(32), b, o), NoFeasibleStart);
}

TEST(Optimizer, ShortRunImprovesObjective) {
  const auto targets = sample_target_gait(64);
  OptimizerOptions o;
  o.starts = 2;
  o.evaluations_per_start = 400;
  const auto before = linkage_objective(LinkageDesign{}, targets, true);
  const auto r = optimize_linkage(LinkageDesign{}, targets, DesignBounds::defaults(), o);
  EXPECT_LE(r.objective, before);
  EXPECT_GE(r.feasible_starts, 1);
}

TEST(BendCheck, DefaultDesignWithinHingeLimits) {
  const auto r = bend_angle_check(LinkageDesign{});
  for (int j = 0; j < kJointCount; ++j)
    if (kIsHinge[static_cast<std::size_t>(j)])
      EXPECT_LE(r.max_bend[static_cast<std::size_t>(j)], r.limit[static_cast<std::size_t>(j)]) << j;
    else
      EXPECT_TRUE(std::isinf(r.limit[static_cast<std::size_t>(j)]));
}
