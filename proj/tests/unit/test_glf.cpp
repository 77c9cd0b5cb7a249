#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "issglf/comparison.hpp"
#include "issglf/glf.hpp"

using namespace issglf;

namespace {

constexpr double kPi = std::numbers::pi;

ParabolicScenario constant_parabolic(double f, double d1, double d2) {
  ParabolicScenario s;
  s.f = SpaceTimeField::constant(f);
  s.d1 = SpaceTimeField::constant(d1);
  s.d2 = SpaceTimeField::constant(d2);
  return s;
}

Trajectory constant_trajectory(PdeClass pde, double value, std::size_t stamps = 3) {
  Trajectory t;
  t.pde = pde;
  t.grid = Grid1D(16, pde == PdeClass::Transport ? Layout::Cell : Layout::Node);
  for (std::size_t i = 0; i < stamps; ++i) {
    std::vector<double> u(grid_size(t.grid), value);
    if (pde == PdeClass::Wave) {
      t.append(0.1 * static_cast<double>(i), u, u);
    } else {
      t.append(0.1 * static_cast<double>(i), u);
    }
  }
  return t;
}

}  // namespace

TEST(TruncationLevel, Parabolic) {
  const Grid g = Grid1D(32, Layout::Node);
  EXPECT_EQ(compute_M_parabolic(constant_parabolic(0, 0, 0), g, 1.0), 0.0);
  EXPECT_NEAR(compute_M_parabolic(constant_parabolic(0.5, 0.2, 0.3), g, 1.0), 1.0, 1e-14);

  auto cube = constant_parabolic(8.0, 0.0, 0.0);
  cube.phi = MonotoneFn([](double v) { return v * v * v; }, -10.0, 10.0, "cube", true);
  EXPECT_NEAR(compute_M_parabolic(cube, g, 1.0), 2.0, 1e-12);
}

TEST(TruncationLevel, ParabolicUsesBoundaryLabels) {
  auto scn = constant_parabolic(0.0, 0.0, 0.0);
  scn.d1 = SpaceTimeField::separable(SpatialProfile(ProfileKind::Linear, {0.0, 1.0}), TimeSignal::constant(1.0));
  // y = 0 is Dirichlet by default; flipping it to Robin leaves d1 with no support at y = 0.
  EXPECT_NEAR(compute_M_parabolic(scn, Grid1D(16, Layout::Node, BoundaryKind::Dirichlet, BoundaryKind::Robin), 1.0),
              0.0, 1e-15);
  EXPECT_NEAR(compute_M_parabolic(scn, Grid1D(16, Layout::Node, BoundaryKind::Robin, BoundaryKind::Dirichlet), 1.0),
              1.0, 1e-15);
}

TEST(TruncationLevel, TransportAndWave) {
  TransportScenario tr;
  tr.d = TimeSignal::constant(0.0);
  EXPECT_EQ(compute_M_transport(tr, 1.0), 0.0);
  tr.d = TimeSignal::constant(1.0);
  tr.k = 0.5;
  EXPECT_DOUBLE_EQ(compute_M_transport(tr, 1.0), 2.0);
  tr.k = -0.5;
  EXPECT_DOUBLE_EQ(compute_M_transport(tr, 1.0), 2.0);
  tr.k = 1.0;
  EXPECT_THROW(compute_M_transport(tr, 1.0), DomainError);

  WaveScenario wv;
  wv.d = TimeSignal::constant(0.0);
  EXPECT_EQ(compute_M_wave(wv, 1.0), 0.0);
  wv.c = 2.0;
  wv.d = TimeSignal::constant(1.0);
  EXPECT_DOUBLE_EQ(compute_M_wave(wv, 1.0), 0.5);
  wv.c = 1.0;
  wv.d = TimeSignal::sinusoid(1.0, 1.0);
  EXPECT_NEAR(compute_M_wave(wv, 1.0), 1.0, 1e-12);
}

TEST(WeightedEnergy, Examples) {
  const Grid g = Grid1D(64, Layout::Node);
  const double M = 0.7;
  const std::vector<double> at_m(grid_size(g), M);
  EXPECT_EQ(weighted_G_energy(at_m, g, 2.0, 1.0, +1, +1, M), 0.0);
  EXPECT_EQ(weighted_G_energy(at_m, g, 2.0, 1.0, -1, +1, M), 0.0);
  const std::vector<double> below(grid_size(g), -M - 5.0);
  EXPECT_EQ(weighted_G_energy(below, g, 2.0, 0.0, 0, +1, M), 0.0);
  const std::vector<double> above(grid_size(g), M + 1.0);
  EXPECT_NEAR(weighted_G_energy(above, g, 2.0, 0.0, 0, +1, M), 1.0 / 3.0, 1e-14);
}

TEST(WeightedEnergy, ExponentialWeightQuadrature) {
  // int_0^1 e^{-r y} G(1) dy with p = 2: (1 - e^{-r}) / (3 r); trapezoid error O(h^2).
  const Grid g = Grid1D(512, Layout::Node);
  const std::vector<double> ones(grid_size(g), 1.0);
  const double r = 2.0;
  EXPECT_NEAR(weighted_G_energy(ones, g, 2.0, r, -1, +1, 0.0), (1.0 - std::exp(-r)) / (3.0 * r), 1e-6);
  EXPECT_NEAR(weighted_G_energy(ones, g, 2.0, r, +1, +1, 0.0), (std::exp(r) - 1.0) / (3.0 * r), 1e-5);
}

TEST(GlfEval, VanishesInsideTruncationBand) {
  GlfSpec spec{PdeClass::Parabolic, 2.0, 0.0, 1.5, 0.0};
  EXPECT_EQ(glf_eval(constant_trajectory(PdeClass::Parabolic, 1.5), 0, spec), 0.0);
  EXPECT_EQ(glf_eval(constant_trajectory(PdeClass::Parabolic, -1.2), 1, spec), 0.0);
  spec.pde = PdeClass::Transport;
  spec.r = 1.0;
  EXPECT_EQ(glf_eval(constant_trajectory(PdeClass::Transport, 1.0), 0, spec), 0.0);
  spec.pde = PdeClass::Wave;
  spec.M = 0.0;
  EXPECT_EQ(glf_eval(constant_trajectory(PdeClass::Wave, 0.0), 2, spec), 0.0);
}

TEST(GlfEval, SingleActiveParabolicTerm) {
  const GlfSpec spec{PdeClass::Parabolic, 2.0, 0.0, 3.0, 0.0};
  const auto traj = constant_trajectory(PdeClass::Parabolic, 4.0);
  const auto comps = glf_components(traj, 0, spec);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_NEAR(comps[0], 1.0 / 3.0, 1e-14);
  EXPECT_EQ(comps[1], 0.0);
  EXPECT_NEAR(glf_eval(traj, 0, spec), 1.0 / 3.0, 1e-14);
}

TEST(GlfEval, ClassMismatchRejected) {
  const GlfSpec spec{PdeClass::Transport, 2.0, 1.0, 0.0, 0.0};
  EXPECT_THROW(glf_eval(constant_trajectory(PdeClass::Parabolic, 1.0), 0, spec), DomainError);
}

TEST(GlfEval, WaveFromDerivativesMatchesCharacteristics) {
  const Grid1D g(32, Layout::Node);
  const double c = 2.0;
  const auto wt = Field::sample(g, [](const Point& y) { return std::sin(3.0 * y[0]); });
  const auto wy = Field::sample(g, [](const Point& y) { return 0.5 - y[0]; });
  Trajectory traj;
  traj.pde = PdeClass::Wave;
  traj.grid = g;
  std::vector<double> xi(g.size()), eta(g.size());
  for (std::size_t j = 0; j < xi.size(); ++j) {
    xi[j] = wt.values[j] + c * wy.values[j];
    eta[j] = wt.values[j] - c * wy.values[j];
  }
  traj.append(0.0, xi, eta);
  const GlfSpec spec{PdeClass::Wave, 2.0, 1.0, 0.3, 1.0};
  EXPECT_NEAR(glf_eval_wave(wt, wy, c, spec), glf_eval(traj, 0, spec), 1e-14);
}

TEST(GlfEval, NonnegativeAndMonotoneInM) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd(0.0, 2.0);
  const Grid g = Grid1D(40, Layout::Node);
  for (int trial = 0; trial < 50; ++trial) {
    Trajectory traj;
    traj.grid = g;
    std::vector<double> u(grid_size(g));
    for (auto& v : u) v = nd(rng);
    traj.append(0.0, u);
    double prev = INFINITY;
    for (double M : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double v = glf_eval(traj, 0, GlfSpec{PdeClass::Parabolic, 2.5, 0.0, M, 0.0});
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(GlfEval, SandwichOnRandomFields) {
  // Coercivity: psi2(|w|_{L^{p+1}}) <= V-hat + mu(M); each component <= psi1(|w|_{L^{p+1}}).
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd(0.0, 1.5);
  std::uniform_real_distribution<double> um(0.0, 2.0);
  const Grid g = Grid1D(64, Layout::Node);
  const auto w = quadrature_weights(g);
  for (double p : {1.5, 2.0, 3.0}) {
    const auto psi = parabolic_psi_set(p);
    for (int trial = 0; trial < 40; ++trial) {
      Trajectory traj;
      traj.grid = g;
      std::vector<double> u(grid_size(g));
      for (auto& v : u) v = nd(rng);
      traj.append(0.0, u);
      const double M = um(rng);
      const GlfSpec spec{PdeClass::Parabolic, p, 0.0, M, 0.0};
      const double norm = lq_norm(u, w, p + 1.0);
      const auto comps = glf_components(traj, 0, spec);
      const double vhat = comps[0] + comps[1];
      ASSERT_LE(psi.psi2(norm), (vhat + psi.mu(M)) * (1.0 + 1e-9) + 1e-12) << "p=" << p;
      for (double cpt : comps) ASSERT_LE(cpt, psi.psi1(norm) * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST(Dissipation, ZeroTrajectoryHasZeroResiduals) {
  const auto traj = constant_trajectory(PdeClass::Parabolic, 0.0, 5);
  const auto rep = dissipation_report(traj, GlfSpec{PdeClass::Parabolic, 2.0, 0.0, 0.0, 0.0}, 3.0);
  ASSERT_EQ(rep.residual.size(), 4u);
  for (double r : rep.residual) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(rep.max_residual, 0.0);
  for (double e : rep.envelope) EXPECT_EQ(e, 0.0);
}

TEST(Dissipation, LengthMismatchRejected) {
  const auto traj = constant_trajectory(PdeClass::Parabolic, 0.0, 5);
  const std::vector<double> slack(3, 0.0);
  EXPECT_THROW(dissipation_report(traj, GlfSpec{}, 1.0, slack), DomainError);
  EXPECT_THROW(dissipation_report(constant_trajectory(PdeClass::Parabolic, 0.0, 1), GlfSpec{}, 1.0),
               DomainError);
}

TEST(Dissipation, ParabolicResidualShrinksUnderRefinement) {
  auto scn = constant_parabolic(0.5, 0.2, 0.3);
  scn.w0 = [](const Point& y) { return 0.2 + 2.8 * std::sin(kPi * y[0] / 2.0); };
  double prev = INFINITY;
  int n = 50;
  double dt = 0.01;
  for (int level = 0; level < 3; ++level, n *= 2, dt /= 2.0) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    const Grid g = Grid1D(n, Layout::Node);
    const auto traj = solve_parabolic(scn, g, cfg);
    GlfSpec spec{PdeClass::Parabolic, 2.0, 0.0, compute_M_parabolic(scn, g, cfg.t_end), 0.0};
    EXPECT_NEAR(spec.M, 1.0, 1e-14);
    const auto rep = dissipation_report(traj, spec, parabolic_decay_rate(scn.c0, spec.p));
    EXPECT_LE(rep.max_residual, 0.0);
    // While V-hat > 0 the residual is a pure consistency error; it must shrink toward 0.
    double active = -INFINITY;
    for (std::size_t i = 0; i < rep.residual.size(); ++i) {
      if (rep.vhat[i] > 0.0) active = std::max(active, rep.residual[i]);
    }
    EXPECT_LT(std::abs(active), prev);
    prev = std::abs(active);
  }
}

TEST(Dissipation, TransportDecaysAtCertifiedRate) {
  TransportScenario scn;
  scn.k = 0.5;
  scn.d = TimeSignal::constant(0.0);
  scn.rho0 = [](const Point& y) { return SpatialProfile(ProfileKind::Bump, {1.0, 0.5, 0.4})(y); };
  SolverConfig cfg;
  cfg.t_end = 3.0;
  const Grid1D g(200, Layout::Cell);
  const auto traj = solve_transport(scn, g, cfg);
  GlfSpec spec{PdeClass::Transport, 2.0, default_transport_r(2.0, scn.k), 0.0, 0.0};
  EXPECT_NEAR(spec.r, 3.0 * std::log(2.0), 1e-14);
  validate(spec, scn);
  const auto rep = dissipation_report(traj, spec, transport_decay_rate(spec.r, scn.lambda0));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    ASSERT_LE(rep.vhat[i], std::exp(-spec.r * traj.times[i]) * rep.vhat[0] * (1.0 + 10.0 * g.h()));
  }
}

TEST(Dissipation, WaveSlackScalesWithForcing) {
  WaveScenario scn;
  scn.c = 2.0;
  scn.f = SpaceTimeField::constant(1.0);
  scn.d = TimeSignal::constant(0.0);
  const auto traj = constant_trajectory(PdeClass::Wave, 0.0, 2);
  const GlfSpec spec{PdeClass::Wave, 2.0, 1.0, 0.0, 1.0};
  const auto slack = wave_slack(traj, scn, spec);
  // 4 (p/eps)^p int_0^1 e^{y} G(1) dy = 16 (e - 1)/3, trapezoid error ~ h^2 on 16 cells.
  EXPECT_NEAR(slack[0], 16.0 * (std::exp(1.0) - 1.0) / 3.0, 4e-3);
}

TEST(SpecValidation, TransportRateWindow) {
  TransportScenario scn;
  scn.k = 0.5;
  GlfSpec spec{PdeClass::Transport, 2.0, 3.0 * std::log(2.0), 0.0, 0.0};
  EXPECT_NO_THROW(validate(spec, scn));
  spec.r = 3.0;
  EXPECT_THROW(validate(spec, scn), DomainError);
  spec.r = 0.0;
  EXPECT_THROW(validate(spec, scn), DomainError);
  spec.r = 1.0;
  spec.p = 1.0;
  EXPECT_THROW(validate(spec, scn), DomainError);
}

TEST(SpecValidation, WaveDefaults) {
  WaveScenario scn;
  scn.c = 2.0;
  GlfSpec spec{PdeClass::Wave, 2.0, 1.0, 0.0, default_wave_eps(scn.c, 1.0)};
  EXPECT_DOUBLE_EQ(spec.eps, 1.0);
  EXPECT_NO_THROW(validate(spec, scn));
  spec.eps = 2.0;
  EXPECT_THROW(validate(spec, scn), DomainError);
  EXPECT_DOUBLE_EQ(wave_decay_rate(2.0, 1.0, 1.0), 1.0);
}

TEST(LocalRate, Examples) {
  TransportScenario scn;
  scn.assumption = LambdaAssumption::A2;
  scn.k = 0.5;
  scn.lambda = [](double s) { return 1.0 / (1.0 + std::abs(s)); };
  const auto a = lambda0_local(scn, 1.0);
  EXPECT_EQ(a.Lambda0, 0.2);
  EXPECT_EQ(a.gate_radius, 4.0);

  scn.lambda = [](double) { return 0.7; };
  EXPECT_EQ(lambda0_local(scn, 3.0).Lambda0, 0.7);

  scn.lambda = [](double s) { return std::exp(-s * s) + 0.1; };
  EXPECT_NEAR(lambda0_local(scn, 0.5).Lambda0, std::exp(-4.0) + 0.1, 1e-15);
  EXPECT_NEAR(lambda0_local(scn, 0.5).Lambda0, 0.1183, 1e-4);

  scn.assumption = LambdaAssumption::A1;
  EXPECT_THROW(lambda0_local(scn, 1.0), DomainError);
}

TEST(ClassicalHeat, DissipationHolds) {
  auto scn = make_heat_scenario(SpaceTimeField::from_signal(TimeSignal::sinusoid(0.3, 1.0)),
                                TimeSignal::constant(0.2),
                                [](const Point& y) { return SpatialProfile(ProfileKind::Bump, {1.0, 0.5, 0.5})(y); });
  SolverConfig cfg;
  cfg.dt = 0.001;
  cfg.t_end = 1.0;
  const auto traj = solve_parabolic(scn, Grid1D(100, Layout::Node), cfg);
  const auto rep = classical_heat_report(traj, scn, 1.0);
  EXPECT_NEAR(rep.decay_rate, kPi * kPi / 2.0 - 1.0, 1e-15);
  EXPECT_LE(rep.max_residual, 1e-2);
}

TEST(GlfCsv, HeaderAndBlankFinalResidual) {
  const auto traj = constant_trajectory(PdeClass::Parabolic, 0.0, 3);
  const auto rep = dissipation_report(traj, GlfSpec{}, 1.0);
  std::ostringstream os;
  write_glf_csv(os, rep);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "t,Vhat,residual,envelope");
  EXPECT_NE(s.find("\n0.2,0,,0\n"), std::string::npos);
}
