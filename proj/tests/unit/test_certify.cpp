#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "issglf/certify.hpp"
#include "issglf/glf.hpp"

using namespace issglf;

namespace {

constexpr double kPi = std::numbers::pi;
const double kE = std::exp(1.0);

Trajectory zero_parabolic(std::size_t stamps) {
  Trajectory t;
  t.grid = Grid1D(16, Layout::Node);
  for (std::size_t i = 0; i < stamps; ++i) t.append(0.1 * static_cast<double>(i), std::vector<double>(17, 0.0));
  t.dt_history.assign(stamps - 1, 0.1);
  return t;
}

InitialData bump(double amp, double center, double width) {
  return [=](const Point& y) { return SpatialProfile(ProfileKind::Bump, {amp, center, width})(y); };
}

}  // namespace

TEST(ParabolicBound, Examples) {
  EXPECT_EQ(bound_parabolic_q(2.0, 0.0, 1.0, 0.0, 1.0), 4.0);
  EXPECT_EQ(bound_parabolic_q(2.0, 3.0, 0.0, 1.0, 1.0), 8.0);
  EXPECT_NEAR(bound_parabolic_q(2.0, std::log(2.0), 1.0, 0.0, 1.0), 2.0, 1e-15);
  for (double q : {2.0, 4.0, kInfNorm}) {
    EXPECT_EQ(bound_parabolic_q(q, 0.7, 1.3, 0.4, 2.0), bound_parabolic_q(2.0, 0.7, 1.3, 0.4, 2.0));
  }
  EXPECT_THROW(bound_parabolic_q(1.5, 0.0, 1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(bound_parabolic_q(2.0, 0.0, 1.0, 0.0, 0.0), DomainError);
}

TEST(TransportBound, PVariantExamples) {
  const double r = 3.0 * std::log(2.0);
  EXPECT_NEAR(bound_transport_p(2.0, r, 0.0, 1.0, 1.0, 0.0), 4.0, 1e-14);
  EXPECT_EQ(bound_transport_p(2.0, r, 0.0, 0.0, 1.0, 0.5), 1.0);
  EXPECT_NEAR(bound_transport_p(2.0, r, 1.0, 1.0, 1.0, 0.0), 2.0, 1e-14);
}

TEST(TransportBound, QVariantExamples) {
  EXPECT_EQ(bound_transport_q(2.0, 0.5, 2.0, 1.0, 1.0, 0.0), 2.0);
  EXPECT_EQ(bound_transport_q(2.0, 0.5, 0.0, 0.0, 1.0, 1.0), 4.0);
  EXPECT_NEAR(bound_transport_q(2.0, 0.9, 0.0, 1.0, 1.0, 0.0), 20.0 / 9.0, 1e-14);
  EXPECT_NEAR(bound_transport_q(kInfNorm, -0.25, 0.0, 1.0, 1.0, 0.0), 8.0, 1e-15);
  EXPECT_THROW(bound_transport_q(2.0, 0.0, 0.0, 1.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(bound_transport_q(2.0, 1.0, 0.0, 1.0, 1.0, 0.0), DomainError);
}

TEST(TransportBound, Liss) {
  TransportScenario scn;
  scn.assumption = LambdaAssumption::A2;
  scn.k = 0.5;
  scn.lambda = [](double s) { return 1.0 / (1.0 + std::abs(s)); };
  const auto rejected = bound_transport_liss(LissVariant::Q, scn, 1.0, 0.0, 1.0, 0.5, 0.5, 2.0);
  EXPECT_FALSE(rejected.gate);
  EXPECT_TRUE(std::isnan(rejected.value));
  const auto at0 = bound_transport_liss(LissVariant::Q, scn, 1.0, 0.0, 1.0, 0.0, 0.0, 2.0);
  EXPECT_TRUE(at0.gate);
  EXPECT_EQ(at0.value, 4.0);
  const auto at10 = bound_transport_liss(LissVariant::Q, scn, 1.0, 10.0, 1.0, 0.0, 0.0, 2.0);
  EXPECT_NEAR(at10.value, 2.0, 1e-14);
  EXPECT_EQ(at10.Lambda0, 0.2);
}

TEST(WaveBound, REpsExamples) {
  EXPECT_EQ(bound_wave_r_eps(2.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 1.0), 0.0);
  EXPECT_NEAR(bound_wave_r_eps(2.0, 1.0, 0.5, 0.0, 1.0, 0.0, 0.0, 1.0), 4.0 * kE, 1e-12);
  EXPECT_NEAR(bound_wave_r_eps(2.0, 1.0, 0.5, 0.0, 0.0, 0.0, 1.0, 2.0), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(bound_wave_r_eps(kInfNorm, 1.0, 0.5, 0.0, 1.0, 0.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(bound_wave_r_eps(2.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0), DomainError);
}

TEST(WaveBound, MExamples) {
  const double e4 = 8.0 * std::exp(4.0);
  EXPECT_NEAR(bound_wave_m(2.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0) / e4, 1.0, 1e-12);
  EXPECT_EQ(bound_wave_m(2.0, 1.0, 0.0, 0.0, 0.0, 1.0, 2.0), 2.0);
  EXPECT_NEAR(bound_wave_m(2.0, 2.0, 4.0, 1.0, 0.0, 0.0, 1.0) / e4, 1.0, 1e-12);
  EXPECT_THROW(bound_wave_m(2.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0), DomainError);
}

TEST(HeatBound, Examples) {
  EXPECT_EQ(heat_clm_bound(0.0, 1.0, 1.0, 0.0, 0.0), 1.0);
  EXPECT_NEAR(heat_clm_bound(0.0, 0.0, 1.0, 1.0, 0.0), 1.0 / std::sqrt(kPi * kPi / 2.0 - 1.0), 1e-15);
  EXPECT_NEAR(heat_clm_bound(0.0, 0.0, 1.0, 1.0, 0.0), 0.5041, 1e-4);
  EXPECT_NEAR(heat_clm_bound(2.0, 1.0, 1.0, 0.0, 0.0), std::exp(1.0 - kPi * kPi / 2.0), 1e-16);
  EXPECT_THROW(heat_clm_bound(0.0, 1.0, 0.0, 0.0, 0.0), DomainError);
  EXPECT_THROW(heat_clm_bound(0.0, 1.0, 2.5, 0.0, 0.0), DomainError);
}

TEST(Bounds, MonotoneInTimeAndInputs) {
  const double r = 3.0 * std::log(2.0);
  for (double t = 0.0; t < 5.0; t += 0.5) {
    EXPECT_GE(bound_parabolic_q(2, t, 1, 0.3, 1), bound_parabolic_q(2, t + 0.5, 1, 0.3, 1));
    EXPECT_GE(bound_transport_p(2, r, t, 1, 1, 0.3), bound_transport_p(2, r, t + 0.5, 1, 1, 0.3));
    EXPECT_GE(bound_transport_q(2, 0.5, t, 1, 1, 0.3), bound_transport_q(2, 0.5, t + 0.5, 1, 1, 0.3));
    EXPECT_GE(bound_wave_m(2, 1, t, 1, 0.2, 0.3, 2), bound_wave_m(2, 1, t + 0.5, 1, 0.2, 0.3, 2));
    EXPECT_GE(bound_wave_r_eps(4, 1, 1, t, 1, 0.2, 0.3, 2), bound_wave_r_eps(4, 1, 1, t + 0.5, 1, 0.2, 0.3, 2));
    EXPECT_GE(heat_clm_bound(t, 1, 1, 0.2, 0.3), heat_clm_bound(t + 0.5, 1, 1, 0.2, 0.3));
  }
  EXPECT_LE(bound_wave_m(2, 1, 1, 1, 0.2, 0.3, 2), bound_wave_m(2, 1, 1, 1.1, 0.3, 0.4, 2));
  EXPECT_LE(bound_transport_q(2, 0.5, 1, 1, 1, 0.3), bound_transport_q(2, 0.5, 1, 1.2, 1, 0.4));
  // At t = 0 with zero disturbances each bound dominates its initial-norm argument.
  EXPECT_GE(bound_parabolic_q(2, 0, 1.7, 0, 1), 1.7);
  EXPECT_GE(bound_transport_p(2, r, 0, 1.7, 1, 0), 1.7);
  EXPECT_GE(bound_transport_q(2, 0.9, 0, 1.7, 1, 0), 1.7);
  EXPECT_GE(bound_wave_m(2, 0.1, 0, 1.7, 0, 0, 50), 1.7);
}

TEST(CheckTrajectory, ZeroTrajectory) {
  const auto traj = zero_parabolic(4);
  IssBound b;
  b.kind = BoundKind::ParabolicQ;
  b.q = 2.0;
  b.times = traj.times;
  for (double t : traj.times) b.rhs.push_back(bound_parabolic_q(2.0, t, 0.0, 1.0, 1.0));
  const auto rep = check_trajectory(traj, 2.0, b, default_tolerance(traj));
  EXPECT_EQ(rep.min_margin, 8.0);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_NEAR(rep.tol, 1.0 / 256.0 + 0.1, 1e-15);
}

TEST(CheckTrajectory, ViolationCountedBeyondTolerance) {
  auto traj = zero_parabolic(3);
  traj.primary[2].assign(17, 1.0);
  IssBound b;
  b.q = kInfNorm;
  b.rhs = {1.0, 1.0, 0.5};
  const auto rep = check_trajectory(traj, kInfNorm, b, 0.1);
  EXPECT_EQ(rep.violations, 1u);
  EXPECT_EQ(rep.min_margin, -0.5);
  const auto loose = check_trajectory(traj, kInfNorm, b, 0.6);
  EXPECT_EQ(loose.violations, 0u);
}

TEST(CheckTrajectory, ClassMismatchRejected) {
  const auto traj = zero_parabolic(2);
  IssBound b;
  b.kind = BoundKind::WaveM;
  b.rhs = {1.0, 1.0};
  EXPECT_THROW(check_trajectory(traj, 2.0, b, 0.0), DomainError);
  b.kind = BoundKind::ParabolicQ;
  b.q = 4.0;
  EXPECT_THROW(check_trajectory(traj, 2.0, b, 0.0), DomainError);
}

TEST(Pipeline, ParabolicConstantDisturbances) {
  ParabolicScenario scn;
  scn.f = SpaceTimeField::constant(0.5);
  scn.d1 = SpaceTimeField::constant(0.2);
  scn.d2 = SpaceTimeField::constant(0.3);
  scn.w0 = [](const Point& y) { return 0.2 + 2.8 * std::sin(kPi * y[0] / 2.0); };
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 2.0;
  const auto traj = solve_parabolic(scn, Grid1D(50, Layout::Node), cfg);
  for (double q : {2.0, 4.0, kInfNorm}) {
    const auto b = make_parabolic_bound(scn, traj, q);
    const auto rep = check_trajectory(traj, q, b, default_tolerance(traj));
    EXPECT_EQ(rep.violations, 0u) << "q=" << q;
    EXPECT_GT(rep.min_margin, 0.0);
  }
}

TEST(Pipeline, HeatBaseline) {
  auto scn = make_heat_scenario(SpaceTimeField::from_signal(TimeSignal::sinusoid(0.3, 1.0)),
                                TimeSignal::constant(0.2), bump(1.0, 0.5, 0.5));
  SolverConfig cfg;
  cfg.dt = 0.005;
  cfg.t_end = 2.0;
  const auto traj = solve_parabolic(scn, Grid1D(100, Layout::Node), cfg);
  const auto rep = check_trajectory(traj, 2.0, make_heat_clm_bound(scn, traj, 1.0), default_tolerance(traj));
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_GT(rep.min_margin, 0.0);
}

TEST(Pipeline, TransportGlobalBounds) {
  TransportScenario scn;
  scn.k = 0.5;
  scn.d = TimeSignal::constant(0.1);
  scn.rho0 = bump(1.0, 0.5, 0.4);
  SolverConfig cfg;
  cfg.t_end = 3.0;
  const auto traj = solve_transport(scn, Grid1D(200, Layout::Cell), cfg);
  const double tol = default_tolerance(traj);
  EXPECT_DOUBLE_EQ(tol, 10.0 / 200.0);
  for (double q : {2.0, kInfNorm}) {
    const auto rep = check_trajectory(traj, q, make_transport_bound(scn, traj, BoundKind::TransportQ, q), tol);
    EXPECT_EQ(rep.violations, 0u);
    EXPECT_GT(rep.min_margin, 0.0);
  }
  const double r = default_transport_r(2.0, scn.k);
  const auto rep = check_trajectory(traj, 3.0, make_transport_bound(scn, traj, BoundKind::TransportP, 3.0, 2.0, r), tol);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_THROW(make_transport_bound(scn, traj, BoundKind::TransportP, 2.0, 2.0, r), DomainError);
}

TEST(Pipeline, TransportConditioningWarning) {
  TransportScenario scn;
  scn.k = 0.01;
  scn.d = TimeSignal::constant(0.0);
  SolverConfig cfg;
  cfg.t_end = 0.1;
  const auto traj = solve_transport(scn, Grid1D(16, Layout::Cell), cfg);
  const auto b = make_transport_bound(scn, traj, BoundKind::TransportQ, 2.0);
  ASSERT_EQ(b.warnings.size(), 1u);
}

TEST(Pipeline, TransportLissGate) {
  TransportScenario scn;
  scn.assumption = LambdaAssumption::A2;
  scn.k = 0.5;
  scn.lambda = [](double s) { return 1.0 / (1.0 + std::abs(s)); };
  scn.d = TimeSignal::constant(0.3);
  SolverConfig cfg;
  cfg.t_end = 3.0;
  scn.rho0 = bump(0.6, 0.5, 0.4);
  auto traj = solve_transport(scn, Grid1D(200, Layout::Cell), cfg);
  auto rep = check_trajectory(traj, kInfNorm, make_transport_liss_bound(scn, traj, LissVariant::Q, kInfNorm, 1.0),
                              default_tolerance(traj));
  EXPECT_TRUE(rep.applicable);
  EXPECT_EQ(rep.violations, 0u);

  scn.rho0 = bump(1.2, 0.5, 0.4);
  traj = solve_transport(scn, Grid1D(200, Layout::Cell), cfg);
  rep = check_trajectory(traj, kInfNorm, make_transport_liss_bound(scn, traj, LissVariant::Q, kInfNorm, 1.0),
                         default_tolerance(traj));
  EXPECT_FALSE(rep.applicable);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_NE(summary_line(rep).find("not-applicable"), std::string::npos);
}

TEST(Pipeline, WaveBounds) {
  WaveScenario scn;
  scn.c = 2.0;
  scn.d = TimeSignal::constant(0.3);
  scn.f = SpaceTimeField::from_signal(TimeSignal::sinusoid(0.2, 1.0));
  scn.w0 = [](const Point& y) { return 0.3 * y[0] * y[0]; };
  scn.phi0 = bump(1.0, 0.5, 0.4);
  SolverConfig cfg;
  cfg.t_end = 4.0;
  const auto traj = solve_wave(scn, Grid1D(200, Layout::Node), cfg);
  const double tol = default_tolerance(traj);
  for (double q : {2.0, 4.0}) {
    auto rep = check_trajectory(traj, q, make_wave_bound(scn, traj, BoundKind::WaveM, q, 1.0), tol, scn.c);
    EXPECT_EQ(rep.violations, 0u);
    rep = check_trajectory(traj, q, make_wave_bound(scn, traj, BoundKind::WaveREps, q, 1.0, 1.0), tol, scn.c);
    EXPECT_EQ(rep.violations, 0u);
  }
}

// With a large wave speed the steady response to a constant boundary input
// has |w_t| + |w_y| = |d|, which exceeds the (4/c)|d| gain once c > 4.
TEST(Pipeline, WaveGainBelowSteadyResponseForFastWaves) {
  WaveScenario scn;
  scn.c = 8.0;
  scn.d = TimeSignal::constant(0.5);
  SolverConfig cfg;
  cfg.t_end = 2.0;
  const auto traj = solve_wave(scn, Grid1D(100, Layout::Node), cfg);
  const auto rep = check_trajectory(traj, 2.0, make_wave_bound(scn, traj, BoundKind::WaveM, 2.0, 1.0),
                                    default_tolerance(traj), scn.c);
  EXPECT_GT(rep.violations, 0u);
  EXPECT_NEAR(rep.lhs.back(), 0.5, 1e-9);
  EXPECT_NEAR(rep.rhs.back(), 0.25, 1e-9);
}

TEST(Reports, CsvAndSummary) {
  const auto traj = zero_parabolic(2);
  IssBound b;
  b.q = 2.0;
  b.rhs = {4.0, 4.0};
  b.params = {{"M", 0.5}};
  const auto rep = check_trajectory(traj, 2.0, b, 0.01);
  std::ostringstream os;
  write_check_csv(os, rep);
  EXPECT_EQ(os.str(), "t,lhs,rhs,margin\n0,0,4,4\n0.1,0,4,4\n");
  EXPECT_EQ(summary_line(rep), "parabolic_q q=2 tol=0.01 min_margin=4 violations=0 M=0.5");
}
