#pragma once

// Built-in acceptance suite. Each criterion prints one line with its measured
// values and thresholds. Groups are independent and may run concurrently;
// the report order is fixed, so output is byte-identical for a given seed.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "issglf/certify.hpp"
#include "issglf/glf.hpp"
#include "issglf/solvers.hpp"
#include "issglf/trunc.hpp"

namespace issglf::acceptance {

enum class Suite { Trunc, Parabolic, Transport, Wave, All };

inline std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::Trunc: return "trunc";
    case Suite::Parabolic: return "parabolic";
    case Suite::Transport: return "transport";
    case Suite::Wave: return "wave";
    case Suite::All: return "all";
  }
  return "?";
}

inline std::optional<Suite> parse_suite(std::string_view s) {
  for (auto v : {Suite::Trunc, Suite::Parabolic, Suite::Transport, Suite::Wave, Suite::All}) {
    if (s == to_string(v)) return v;
  }
  return std::nullopt;
}

struct CriterionResult {
  int id = 0;
  std::string group;
  std::string title;
  bool pass = false;
  std::string detail;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline std::string sci(double v) { return format_sci(v, 3); }

inline std::string q_label(double q) { return std::isinf(q) ? "inf" : format_number(q); }

inline InitialData bump(double amp, double center, double width) {
  const SpatialProfile p(ProfileKind::Bump, {amp, center, width});
  return [p](const Point& y) { return p(y); };
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Criterion 1: truncation calculus on seeded random samples.
inline CriterionResult truncation_calculus(std::uint64_t seed) {
  const auto t0 = Clock::now();
  CriterionResult r{1, "trunc", "truncation calculus G1-G8", true, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> um(0.0, 10.0);
  std::uniform_real_distribution<double> ue(1e-6, 5.0);
  double min_gap = INFINITY, max_g2 = 0.0, max_scale = 0.0;
  std::size_t sign_failures = 0;
  for (double p : {1.5, 2.0, 3.0, 5.0}) {
    const TruncationPair pair(p);
    for (int i = 0; i < 10000; ++i) {
      const double s = u(rng), tau = u(rng), m = u(rng), eps = ue(rng), k = um(rng);
      // G1: both vanish on the nonpositive axis; G3: g is nondecreasing.
      if (pair.G(-std::abs(s)) != 0.0 || pair.g(-std::abs(s)) != 0.0) ++sign_failures;
      if (pair.g(std::min(s, tau)) > pair.g(std::max(s, tau))) ++sign_failures;
      // G2: G(s) = s g(s) / (p + 1).
      const double g2 = s * pair.g(s) / (p + 1.0);
      if (g2 != 0.0) max_g2 = std::max(max_g2, rel_err(pair.G(s), g2));
      const double scaled = std::pow(k, p + 1.0) * pair.G(s);
      if (scaled != 0.0) max_scale = std::max(max_scale, rel_err(pair.G(k * s), scaled));
      const std::array<double, 2> st{s, tau};
      const std::array<double, 3> stm{s, tau, m};
      const std::array<double, 3> ste{s, tau, eps};
      auto record = [&](TruncProperty prop, std::span<const double> args) {
        const auto sides = g_property_sides(pair, prop, args);
        min_gap = std::min(min_gap, sides.gap() / (1.0 + std::abs(sides.lhs)));
      };
      for (auto prop : {TruncProperty::G4, TruncProperty::G5, TruncProperty::G6}) record(prop, st);
      record(TruncProperty::G7, stm);
      record(TruncProperty::G8, ste);
    }
  }
  const bool fast = seconds_since(t0) < 5.0;
  r.pass = sign_failures == 0 && min_gap >= -1e-9 && max_g2 <= 1e-12 && max_scale <= 1e-12 && fast;
  r.detail = "min relative gap G4-G8 = " + sci(min_gap) + " (>= -1e-9), G1/G3 failures = " +
             std::to_string(sign_failures) + " (0), G2 max rel err = " + sci(max_g2) +
             " (<= 1e-12), scaling max rel err = " + sci(max_scale) + " (<= 1e-12), 4 x 10^4 samples, runtime < 5 s: " +
             (fast ? "yes" : "no");
  return r;
}

/// Criterion 2: Young-with-eps gap and the Gronwall envelope.
inline CriterionResult young_and_gronwall(std::uint64_t seed) {
  CriterionResult r{2, "trunc", "Young and Gronwall lemmas", true, ""};
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> ur(1.05, 6.0);
  std::uniform_real_distribution<double> uab(0.0, 10.0);
  std::uniform_real_distribution<double> ueps(-3.0, 2.0);
  double min_gap = INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const double rr = ur(rng);
    const double q = rr / (rr - 1.0);
    const double a = uab(rng), b = uab(rng), eps = std::pow(10.0, ueps(rng));
    min_gap = std::min(min_gap, young_epsilon_gap(rr, q, a, b, eps));
  }
  const std::size_t n = 1001;
  const std::vector<double> phi(n, -1.0), psi(n, 1.0);
  const auto env = gronwall_envelope(phi, psi, 0.0, 1e-3);
  double gr_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    gr_err = std::max(gr_err, std::abs(env[i] - (1.0 - std::exp(-1e-3 * static_cast<double>(i)))));
  }
  r.pass = min_gap >= 0.0 && gr_err <= 1e-5;
  r.detail = "Young min gap = " + sci(min_gap) + " over 10^4 samples (>= 0), Gronwall max err vs 1 - e^{-t} = " +
             sci(gr_err) + " (<= 1e-5)";
  return r;
}

/// Criterion 3: classical heat baseline against its L^2 bound.
inline CriterionResult heat_baseline() {
  const auto t0 = Clock::now();
  CriterionResult r{3, "parabolic", "heat baseline with classical functional", true, ""};
  const auto scn = make_heat_scenario(SpaceTimeField::from_signal(TimeSignal::sinusoid(0.3, 1.0)),
                                      TimeSignal::constant(0.2), bump(1.0, 0.5, 0.5));
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  const auto traj = solve_parabolic(scn, Grid1D(200, Layout::Node), cfg);
  const double tol = default_tolerance(traj);
  const auto rep = check_trajectory(traj, 2.0, make_heat_clm_bound(scn, traj, 1.0), tol);
  const bool fast = seconds_since(t0) < 10.0;
  r.pass = rep.violations == 0 && rep.min_margin > 0.0 && fast;
  r.detail = "n = 200, dt = 1e-3, tol = " + sci(tol) + ", min margin = " + sci(rep.min_margin) +
             " (> 0), violations = " + std::to_string(rep.violations) + " (0), runtime < 10 s: " + (fast ? "yes" : "no");
  return r;
}

inline ParabolicScenario glf_parabolic_scenario() {
  ParabolicScenario scn;
  scn.id = "parabolic_glf";
  scn.f = SpaceTimeField::constant(0.5);
  scn.d1 = SpaceTimeField::constant(0.2);
  scn.d2 = SpaceTimeField::constant(0.3);
  scn.w0 = [](const Point& y) { return 0.2 + 2.8 * std::sin(std::numbers::pi * y[0] / 2.0); };
  return scn;
}

/// Criterion 4: parabolic dissipation under refinement and the q-uniform bound.
inline CriterionResult parabolic_glf() {
  CriterionResult r{4, "parabolic", "parabolic functional and bound", true, ""};
  const auto scn = glf_parabolic_scenario();
  std::ostringstream d;
  double C = 0.0;
  double prev_active = INFINITY;
  bool consistent = true, shrinking = true;
  Trajectory coarse;
  int n = 50;
  double dt = 0.01;
  double M = 0.0;
  d << "(a)";
  for (int level = 0; level < 3; ++level, n *= 2, dt /= 2.0) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 2.0;
    const Grid grid = Grid1D(n, Layout::Node);
    auto traj = solve_parabolic(scn, grid, cfg);
    M = compute_M_parabolic(scn, grid, cfg.t_end);
    const GlfSpec spec{PdeClass::Parabolic, 2.0, 0.0, M, 0.0};
    const auto s = dissipation_report(traj, spec, parabolic_decay_rate(scn.c0, spec.p));
    // Stamps with Vhat > 0; after extinction the residual is identically 0.
    double active = -INFINITY;
    for (std::size_t i = 0; i < s.residual.size(); ++i) {
      if (s.vhat[i] > 0.0) active = std::max(active, s.residual[i]);
    }
    const double scale = 1.0 / n + dt;
    if (level == 0) C = std::max(s.max_residual, 0.0) / scale;
    consistent = consistent && s.max_residual <= C * scale;
    shrinking = shrinking && std::abs(active) < prev_active;
    prev_active = std::abs(active);
    d << " n=" << n << " dt=" << format_number(dt) << ": max res " << sci(s.max_residual) << ", active-phase max "
      << sci(active) << ";";
    if (level == 0) coarse = std::move(traj);
  }
  d << " C = " << sci(C) << ", max res <= C(h+dt) at every level: " << (consistent ? "yes" : "no")
    << ", |active-phase max| strictly decreasing: " << (shrinking ? "yes" : "no") << "; (b) M = " << format_number(M);
  bool bounds_ok = true;
  for (double q : {2.0, 4.0, kInfNorm}) {
    const auto rep = check_trajectory(coarse, q, make_parabolic_bound(scn, coarse, q), default_tolerance(coarse));
    bounds_ok = bounds_ok && rep.violations == 0;
    d << ", q=" << q_label(q) << " violations " << rep.violations << " min margin " << sci(rep.min_margin);
  }
  r.pass = consistent && shrinking && bounds_ok;
  r.detail = d.str();
  return r;
}

inline TransportScenario transport_bump(double k, double d) {
  TransportScenario scn;
  scn.k = k;
  scn.d = TimeSignal::constant(d);
  scn.rho0 = bump(1.0, 0.5, 0.4);
  return scn;
}

/// Criterion 5: global transport decay, bound and steady state.
inline CriterionResult transport_global() {
  CriterionResult r{5, "transport", "transport global decay and bound", true, ""};
  std::ostringstream d;
  const Grid1D grid(200, Layout::Cell);
  SolverConfig cfg;
  cfg.t_end = 3.0;

  const auto free = transport_bump(0.5, 0.0);
  const auto traj = solve_transport(free, grid, cfg);
  const GlfSpec spec{PdeClass::Transport, 2.0, 3.0 * std::log(2.0), compute_M_transport(free, cfg.t_end), 0.0};
  validate(spec, free);
  const auto s = dissipation_report(traj, spec, transport_decay_rate(spec.r, free.lambda0));
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    worst = std::max(worst, s.vhat[i] / (std::exp(-spec.r * traj.times[i]) * s.vhat[0]));
  }
  const double allow = 1.0 + 10.0 * grid.h();
  const bool decay_ok = worst <= allow;
  d << "max Vhat(t)/(e^{-rt} Vhat(0)) = " << sci(worst) << " (<= " << format_number(allow) << ")";

  const auto forced = transport_bump(0.5, 0.1);
  const auto ftraj = solve_transport(forced, grid, cfg);
  bool bound_ok = true;
  for (double q : {2.0, kInfNorm}) {
    const auto rep = check_trajectory(ftraj, q, make_transport_bound(forced, ftraj, BoundKind::TransportQ, q),
                                      default_tolerance(ftraj));
    bound_ok = bound_ok && rep.violations == 0;
    d << ", q=" << q_label(q) << " violations " << rep.violations << " min margin " << sci(rep.min_margin);
  }

  TransportScenario steady;
  steady.k = 0.5;
  steady.d = TimeSignal::constant(0.5);
  steady.rho0 = [](const Point&) { return 1.0; };
  SolverConfig scfg;
  scfg.t_end = 1000.0 * scfg.cfl_sigma * grid.h();
  const auto straj = solve_transport(steady, grid, scfg);
  double dev = 0.0;
  for (const auto& snap : straj.primary) {
    for (double v : snap) dev = std::max(dev, std::abs(v - 1.0));
  }
  const bool steady_ok = dev <= 1e-10 && straj.dt_history.size() >= 1000;
  d << ", steady state over " << straj.dt_history.size() << " steps max deviation " << sci(dev) << " (<= 1e-10)";
  r.pass = decay_ok && bound_ok && steady_ok;
  r.detail = d.str();
  return r;
}

/// Criterion 6: local rate and the LISS gate.
inline CriterionResult transport_local() {
  CriterionResult r{6, "transport", "transport local rate and gate", true, ""};
  TransportScenario scn;
  scn.assumption = LambdaAssumption::A2;
  scn.k = 0.5;
  scn.lambda = [](double s) { return 1.0 / (1.0 + std::abs(s)); };
  scn.d = TimeSignal::constant(0.3);
  const double R0 = 1.0;
  const auto rate = lambda0_local(scn, R0);
  const bool exact = rate.Lambda0 == 0.2;
  SolverConfig cfg;
  cfg.t_end = 3.0;
  // Odd cell count puts a cell center on the bump peak, so the sup norm is the amplitude.
  const Grid1D grid(201, Layout::Cell);
  auto run = [&](double amp) {
    auto s = scn;
    s.rho0 = bump(amp, 0.5, 0.4);
    const auto traj = solve_transport(s, grid, cfg);
    return check_trajectory(traj, kInfNorm, make_transport_liss_bound(s, traj, LissVariant::Q, kInfNorm, R0),
                            default_tolerance(traj));
  };
  const auto accepted = run(0.6);
  const auto rejected = run(1.2);
  auto gate_value = [](const CheckReport& rep) -> double {
    for (const auto& [k, v] : rep.params) {
      if (k == "gate_value") return v;
    }
    return NAN;
  };
  r.pass = exact && accepted.applicable && accepted.violations == 0 && !rejected.applicable;
  r.detail = "Lambda0 = " + format_number(rate.Lambda0) + " (== 0.2 exactly: " + (exact ? "yes" : "no") +
             "), gate at " + format_number(gate_value(rejected)) + ": " + (rejected.applicable ? "accepted" : "rejected") +
             " (expect rejected), gate at " + format_number(gate_value(accepted)) + ": " +
             (accepted.applicable ? "accepted" : "rejected") + " (expect accepted), accepted run violations " +
             std::to_string(accepted.violations) + " (0), min margin " + sci(accepted.min_margin);
  return r;
}

/// Criterion 7: wave boundary identities, finite-time absorption and bounds.
inline CriterionResult wave_suite() {
  CriterionResult r{7, "wave", "wave closures, absorption and bounds", true, ""};
  std::ostringstream d;
  const double c = 2.0;
  const Grid1D grid(200, Layout::Node);

  WaveScenario scn;
  scn.c = c;
  scn.d = TimeSignal::constant(0.3);
  scn.f = SpaceTimeField::from_signal(TimeSignal::sinusoid(0.2, 1.0));
  scn.w0 = [](const Point& y) { return 0.3 * y[0] * y[0]; };
  scn.phi0 = bump(1.0, 0.5, 0.4);
  SolverConfig cfg;
  cfg.t_end = 4.0;
  const auto traj = solve_wave(scn, grid, cfg);
  const std::size_t last = grid.size() - 1;
  double res_right = 0.0, res_left = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    res_right = std::max(res_right, std::abs(traj.primary[i][last] - c * scn.d(traj.times[i])));
    res_left = std::max(res_left, std::abs(traj.secondary[i][0] + traj.primary[i][0]));
  }
  const bool ident = res_right == 0.0 && res_left == 0.0;
  d << "(a) max |xi(1,t) - c d(t)| = " << format_number(res_right) << ", max |eta(0,t) + xi(0,t)| = "
    << format_number(res_left) << " (both 0) over " << traj.size() << " stamps";

  WaveScenario quiet;
  quiet.c = c;
  quiet.phi0 = bump(1.0, 0.5, 0.4);
  SolverConfig qcfg;
  qcfg.t_end = 2.0 / c + 0.2;
  const auto qtraj = solve_wave(quiet, grid, qcfg);
  const auto [wt, wy] = reconstruct_wave_state(qtraj.primary_field(qtraj.size() - 1),
                                               qtraj.secondary_field(qtraj.size() - 1), c);
  const double sup = std::max(lq_norm(wt, kInfNorm), lq_norm(wy, kInfNorm));
  const double floor = 10.0 * grid.h();
  const bool absorbed = sup <= floor;
  d << "; (b) sup(|w_t|, |w_y|) at t = " << format_number(qtraj.times.back()) << " is " << sci(sup)
    << " (<= 10h = " << format_number(floor) << ")";

  bool bounds_ok = true;
  const double tol = default_tolerance(traj);
  d << "; (c)";
  for (double q : {2.0, 4.0}) {
    const auto m = check_trajectory(traj, q, make_wave_bound(scn, traj, BoundKind::WaveM, q, 1.0), tol, c);
    const auto re = check_trajectory(traj, q, make_wave_bound(scn, traj, BoundKind::WaveREps, q, 1.0,
                                                              default_wave_eps(c, 1.0)),
                                     tol, c);
    bounds_ok = bounds_ok && m.violations == 0 && re.violations == 0;
    d << " q=" << format_number(q) << ": wave_m violations " << m.violations << " (min margin " << sci(m.min_margin)
      << "), wave_r_eps violations " << re.violations << " (min margin " << sci(re.min_margin) << ");";
  }
  r.pass = ident && absorbed && bounds_ok;
  r.detail = d.str();
  r.detail.pop_back();
  return r;
}

/// Criterion 8: closed-form constants reproduced exactly.
inline CriterionResult bound_exactness() {
  CriterionResult r{8, "all", "bound evaluator constants", true, ""};
  const double four = bound_parabolic_q(2.0, 0.0, 1.0, 0.0, 1.0);
  bool eight_m = true;
  for (double M : {0.1, 0.25, 1.0, 3.7, 1e3}) {
    for (double q : {2.0, 4.0, kInfNorm}) eight_m = eight_m && bound_parabolic_q(q, 1.0, 0.0, M, 1.0) == 8.0 * M;
  }
  const double wave_err = rel_err(bound_wave_m(2.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0), 8.0 * std::exp(4.0));
  double tq_err = 0.0;
  for (double k : {0.05, 0.1, 0.5, 0.9, -0.3, -0.75}) {
    tq_err = std::max(tq_err, rel_err(bound_transport_q(2.0, k, 0.0, 1.0, 1.0, 0.0), 2.0 / std::abs(k)));
  }
  r.pass = four == 4.0 && eight_m && wave_err <= 1e-10 && tq_err <= 1e-12;
  r.detail = "parabolic init constant = " + format_number(four) + " (== 4), gain term == 8M exactly: " +
             (eight_m ? "yes" : "no") + ", wave_m(m=1,c=1,t=0) rel err vs 8e^4 = " + sci(wave_err) +
             " (<= 1e-10), transport_q prefactor rel err vs 2/|k| = " + sci(tq_err) + " (<= 1e-12)";
  return r;
}

inline std::vector<CriterionResult> run_group(Suite g, std::uint64_t seed) {
  switch (g) {
    case Suite::Trunc: return {truncation_calculus(seed), young_and_gronwall(seed)};
    case Suite::Parabolic: return {heat_baseline(), parabolic_glf()};
    case Suite::Transport: return {transport_global(), transport_local()};
    case Suite::Wave: return {wave_suite()};
    case Suite::All: return {bound_exactness()};
  }
  return {};
}

inline std::string format_result(const CriterionResult& r) {
  return "criterion " + std::to_string(r.id) + " [" + r.group + "] " + (r.pass ? "PASS" : "FAIL") + " " + r.title +
         ": " + r.detail + "\n";
}

/// Runs the listed groups concurrently and returns results in criterion order.
inline std::vector<CriterionResult> run_groups(const std::vector<Suite>& groups, std::uint64_t seed) {
  std::vector<std::future<std::vector<CriterionResult>>> jobs;
  for (auto g : groups) jobs.push_back(std::async(std::launch::async, [g, seed] { return run_group(g, seed); }));
  std::vector<CriterionResult> out;
  for (auto& j : jobs) {
    auto part = j.get();
    out.insert(out.end(), part.begin(), part.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

inline std::string format_report(const std::vector<CriterionResult>& results) {
  std::string s;
  for (const auto& r : results) s += format_result(r);
  return s;
}

}  // namespace detail

struct VerifyOutcome {
  std::string report;
  bool pass = true;
};

inline VerifyOutcome verify(Suite suite, std::uint64_t seed) {
  using namespace detail;
  const std::vector<Suite> every{Suite::Trunc, Suite::Parabolic, Suite::Transport, Suite::Wave, Suite::All};
  const std::vector<Suite> groups = suite == Suite::All ? every : std::vector<Suite>{suite};
  auto results = run_groups(groups, seed);
  if (suite == Suite::All) {
    // Criterion 9: a second pass must reproduce the report byte for byte.
    const std::string first = format_report(results);
    const std::string second = format_report(run_groups(groups, seed));
    const bool same = first == second;
    results.push_back({9, "all", "determinism", same,
                       std::string("second run of criteria 1-8 with seed ") + std::to_string(seed) +
                           (same ? " byte-identical" : " differs")});
  }
  VerifyOutcome out;
  out.report = "verify " + std::string(to_string(suite)) + " seed=" + std::to_string(seed) + "\n";
  std::size_t passed = 0;
  for (const auto& r : results) {
    out.report += format_result(r);
    if (r.pass) ++passed;
    out.pass = out.pass && r.pass;
  }
  out.report += "summary: " + std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
  return out;
}

}  // namespace issglf::acceptance
