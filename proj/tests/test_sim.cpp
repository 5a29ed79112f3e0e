#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "aerobat/config/config.hpp"
#include "aerobat/errors.hpp"
#include "aerobat/sim/integrator.hpp"
#include "aerobat/sim/metrics.hpp"
#include "aerobat/sim/rk4.hpp"
#include "aerobat/sim/scenarios.hpp"
#include "aerobat/sim/trajectory_log.hpp"

using namespace aerobat;
using namespace aerobat::sim;
using dynamics::CoupledModels;
using dynamics::CoupledState;

namespace {

CoupledModels quiet_models() {
  CoupledModels m;
  m.suspension.damping = 0.0;
  return m;
}

CoupledState swinging(const CoupledModels& m) {
  auto s = CoupledState::initial(m);
  s.aerobat.position = dynamics::static_hang_offset(m) + Eigen::Vector3d(0.002, 0.001, -0.001);
  s.aerobat.omega = Eigen::Vector3d(0.5, -0.3, 0.2);
  return s;
}

Eigen::VectorXd run(const CoupledModels& m, double dt, double t_end, Integrator i) {
  auto s = swinging(m);
  for (int k = 0; k < static_cast<int>(std::lround(t_end / dt)); ++k) s = step_coupled(s, {}, m, dt, i);
  return pack(s);
}

}  // namespace

TEST(Integrator, NamesRoundTrip) {
  for (auto i : {Integrator::Rk4, Integrator::SemiImplicitEuler})
    EXPECT_EQ(parse_integrator(to_string(i)), i);
  EXPECT_THROW(parse_integrator("leapfrog"), std::invalid_argument);
}

TEST(Integrator, BallisticCentreOfMassIsExact) {
  const auto m = quiet_models();
  auto s = swinging(m);
  const double total = m.guard.mass + m.aerobat.total_mass();
  const Eigen::Vector3d p0 = dynamics::total_momentum(s, m);
  const double dt = 1e-3;
  for (int k = 0; k < 500; ++k) s = step_coupled(s, {}, m, dt);
  const Eigen::Vector3d expect = p0 + Eigen::Vector3d(0, 0, -total * m.guard.gravity * 0.5);
  EXPECT_NEAR((dynamics::total_momentum(s, m) - expect).norm(), 0.0, 1e-10);
}

TEST(Integrator, HarmonicOscillatorRk4DriftIsSmall) {
  Eigen::Vector2d x(1.0, 0.0);
  const double w = 2.0 * 3.141592653589793;
  auto f = [&](double, const Eigen::Vector2d& v) { return Eigen::Vector2d(v[1], -w * w * v[0]); };
  for (int k = 0; k < 10000; ++k) x = rk4_step(f, 0.0, x, 1e-3);
  const double e = 0.5 * x[1] * x[1] + 0.5 * w * w * x[0] * x[0];
  EXPECT_NEAR(e / (0.5 * w * w), 1.0, 1e-8);
}

TEST(Integrator, ConvergenceOrders) {
  const auto m = quiet_models();
  const double t = 0.05;
  const auto ref = run(m, 1e-5, t, Integrator::Rk4);
  const double r1 = (run(m, 4e-4, t, Integrator::Rk4) - ref).norm();
  const double r2 = (run(m, 2e-4, t, Integrator::Rk4) - ref).norm();
  EXPECT_GT(std::log2(r1 / r2), 3.5);
  const double e1 = (run(m, 4e-4, t, Integrator::SemiImplicitEuler) - ref).norm();
  const double e2 = (run(m, 2e-4, t, Integrator::SemiImplicitEuler) - ref).norm();
  EXPECT_GT(std::log2(e1 / e2), 0.8);
  EXPECT_LT(std::log2(e1 / e2), 1.5);
}

TEST(Integrator, QuaternionsStayNormalized) {
  const auto m = quiet_models();
  auto s = swinging(m);
  for (int k = 0; k < 200; ++k) s = step_coupled(s, {}, m, 1e-3, Integrator::SemiImplicitEuler);
  EXPECT_NEAR(s.aerobat.orientation.norm(), 1.0, 1e-14);
  EXPECT_NEAR(s.guard.orientation.norm(), 1.0, 1e-14);
}

TEST(Integrator, BlowupIsReported) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  EXPECT_NO_THROW(check_finite(x, 0.0, "x"));
  x[1] = 2e6;
  EXPECT_THROW(check_finite(x, 0.0, "x"), NumericalBlowup);
  x[1] = std::nan("");
  EXPECT_THROW(check_finite(x, 0.0, "x"), NumericalBlowup);
}

TEST(TrajectoryLog, CsvRoundTripIsExact) {
  TrajectoryLog log({"time", "x", "y,z"}, "abc123");
  log.append({0.0, 1.0 / 3.0, -2e-300});
  log.append({0.1, 3.141592653589793, 1e300});
  const auto back = TrajectoryLog::from_csv(log.to_csv());
  EXPECT_EQ(back.columns(), log.columns());
  EXPECT_EQ(back.rows(), log.rows());
  EXPECT_EQ(back.config_hash(), "abc123");
  EXPECT_EQ(back.version(), kVersion);
}

TEST(TrajectoryLog, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "aerobat_test_log";
  std::filesystem::create_directories(dir);
  TrajectoryLog log({"time", "v"});
  for (int k = 0; k < 10; ++k) log.append({k * 0.01, std::sin(k)});
  log.write_csv(dir / "log.csv");
  EXPECT_EQ(TrajectoryLog::read_csv(dir / "log.csv").rows(), log.rows());
  std::filesystem::remove_all(dir);
}

TEST(TrajectoryLog, RejectsBadRows) {
  TrajectoryLog log({"time", "v"});
  log.append({0.0, 1.0});
  EXPECT_THROW(log.append({0.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(log.append({1.0}), std::invalid_argument);
  EXPECT_THROW(log.column("w"), std::out_of_range);
}

TEST(TrajectoryLog, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(Metrics, RmsAfterSkipsTransient) {
  const std::vector<double> t{0.0, 1.0, 2.0, 3.0};
  const std::vector<Eigen::Vector3d> e{{10, 0, 0}, {0, 3, 4}, {0, 0, 5}, {3, 4, 0}};
  EXPECT_NEAR(rms_after(t, e, 1.0), 5.0, 1e-15);
}

TEST(Metrics, SettlingTimeOfFirstOrderStep) {
  std::vector<double> t, y;
  for (int k = 0; k <= 5000; ++k) {
    t.push_back(k * 1e-3);
    y.push_back(1.0 - std::exp(-t.back()));
  }
  // Band is measured against the final sample: exp(-t) - exp(-5) <= 0.02 (1 - exp(-5)).
  const double tail = std::exp(-5.0);
  EXPECT_NEAR(settling_time(t, y), -std::log(0.02 * (1.0 - tail) + tail), 2e-3);
}

TEST(Metrics, CycleDeviation) {
  std::vector<std::vector<Eigen::Vector2d>> cycles(3, std::vector<Eigen::Vector2d>(4, Eigen::Vector2d(1, 1)));
  EXPECT_EQ(cycle_deviation(cycles, 0.3), 0.0);
  cycles[2][1] += Eigen::Vector2d(0.003, 0.004);
  EXPECT_NEAR(cycle_deviation(cycles, 0.3), 0.005 / 0.3, 1e-14);
}

TEST(Metrics, JsonHasOnlyPopulatedFields) {
  Metrics m;
  m.rms_position_error = 0.5;
  const auto j = m.to_json();
  EXPECT_NE(j.find("rms_position_error"), std::string::npos);
  EXPECT_EQ(j.find("settling_time"), std::string::npos);
}

TEST(Scenarios, NamesParse) {
  for (const auto& n : scenario_names()) EXPECT_EQ(to_string(parse_scenario(n)), n);
  try {
    parse_scenario("loop");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("hover"), std::string::npos);
  }
}

TEST(Scenarios, WingtipTraceDeterministicPerSeed) {
  config::Config c;
  c.sim.phase_jitter = 0.01;
  const auto a = run_wingtip_trace(c);
  const auto b = run_wingtip_trace(c);
  EXPECT_EQ(a.logs.front().second.to_csv(), b.logs.front().second.to_csv());
  c.sim.seed = 2;
  const auto d = run_wingtip_trace(c);
  EXPECT_NE(a.logs.front().second.to_csv(), d.logs.front().second.to_csv());
}

TEST(Scenarios, OracleScenariosPass) {
  const config::Config c;
  EXPECT_TRUE(run_aero_step(c).passed);
  EXPECT_TRUE(run_observer_demo(c).passed);
  EXPECT_TRUE(run_wingtip_trace(c).passed);
}

TEST(Scenarios, ShortHoverIsDeterministic) {
  config::Config c;
  c.sim.duration = 0.5;
  c.sim.transient = 0.1;
  const auto a = run_hover(c);
  const auto b = run_hover(c);
  ASSERT_FALSE(a.failure);
  EXPECT_EQ(a.logs.front().second.to_csv(), b.logs.front().second.to_csv());
}
