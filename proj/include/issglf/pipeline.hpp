#pragma once

// Config-driven runs: solve, evaluate the functional, audit the bounds, and
// write the CSV artifacts plus a plain-text summary.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "issglf/certify.hpp"
#include "issglf/config.hpp"
#include "issglf/glf.hpp"
#include "issglf/solvers.hpp"

namespace issglf {

inline constexpr const char* kOutputRootEnv = "ISSGLF_OUTPUT_ROOT";
inline constexpr const char* kConfigEchoMarker = "--- config ---";

struct RunOutcome {
  int exit_code = 0;  // 0 clean, 1 bound violations, 2 solver or validation error
  std::size_t violations = 0;
  std::string summary;
  std::filesystem::path directory;
  std::vector<std::string> files;
};

/// ISSGLF_OUTPUT_ROOT/<id> when the variable is set, otherwise output.directory
/// (default out/<id>).
inline std::filesystem::path resolve_output_dir(const RunConfig& cfg) {
  if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
    return std::filesystem::path(root) / cfg.scenario.id;
  }
  if (!cfg.output.directory.empty()) return cfg.output.directory;
  return std::filesystem::path("out") / cfg.scenario.id;
}

namespace detail {

inline std::string q_label(double q) { return std::isinf(q) ? "inf" : format_number(q); }

class RunWriter {
 public:
  RunWriter(std::filesystem::path dir, RunOutcome& out) : dir_(std::move(dir)), out_(out) {
    std::filesystem::create_directories(dir_);
  }

  template <class F>
  void file(const std::string& name, F&& body) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw Error("cannot write " + (dir_ / name).string());
    body(os);
    out_.files.push_back(name);
  }

 private:
  std::filesystem::path dir_;
  RunOutcome& out_;
};

struct Audit {
  std::ostringstream text;
  std::size_t violations = 0;

  void check(RunWriter& w, const Trajectory& traj, const IssBound& b, double tol, double wave_c = 1.0) {
    const auto rep = check_trajectory(traj, b.q, b, tol, wave_c);
    w.file("check_" + std::string(to_string(b.kind)) + "_q" + q_label(b.q) + ".csv",
           [&](std::ostream& os) { write_check_csv(os, rep); });
    text << summary_line(rep) << '\n';
    for (const auto& warn : rep.warnings) text << "  warning: " << warn << '\n';
    violations += rep.violations;
  }
};

inline std::vector<BoundKind> selected_bounds(const RunConfig& cfg) {
  if (!cfg.certify.bounds.empty()) return cfg.certify.bounds;
  switch (cfg.scenario.cls) {
    case ScenarioClass::Heat: return {BoundKind::HeatClm};
    case ScenarioClass::Parabolic: return {BoundKind::ParabolicQ};
    case ScenarioClass::Transport:
      if (cfg.scenario.assumption == LambdaAssumption::A2) return {BoundKind::TransportLiss};
      return {BoundKind::TransportP, BoundKind::TransportQ};
    case ScenarioClass::Wave: return {BoundKind::WaveM, BoundKind::WaveREps};
  }
  return {};
}

inline void write_series(RunWriter& w, std::ostream& text, const GlfSeries& s) {
  w.file("glf.csv", [&](std::ostream& os) { write_glf_csv(os, s); });
  text << "decay_rate = " << format_number(s.decay_rate) << '\n';
  text << "Vhat(0) = " << format_number(s.vhat.front()) << '\n';
  text << "Vhat(T) = " << format_number(s.vhat.back()) << '\n';
  text << "max_residual = " << format_number(s.max_residual) << '\n';
}

inline void write_trajectory(RunWriter& w, const Trajectory& traj) {
  w.file("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); });
  if (traj.has_secondary()) {
    w.file("trajectory_eta.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj, true); });
  }
  w.file("trajectory.meta", [&](std::ostream& os) { write_trajectory_meta(os, traj); });
}

inline void describe_run(std::ostream& text, const RunConfig& cfg, const Trajectory& traj) {
  text << "scenario = " << cfg.scenario.id << " (" << to_string(cfg.scenario.cls) << ")\n";
  if (!cfg.scenario.description.empty()) text << "description = " << cfg.scenario.description << '\n';
  text << "scheme = " << traj.scheme << '\n';
  text << "h = " << format_number(grid_spacing(traj.grid)) << '\n';
  text << "steps = " << traj.dt_history.size() << ", stamps = " << traj.size() << '\n';
  text << "t_end = " << format_number(traj.times.back()) << '\n';
}

inline std::size_t run_parabolic(const RunConfig& cfg, RunWriter& w, std::ostream& text) {
  const auto scn = make_parabolic(cfg.scenario);
  const Grid grid = make_grid(cfg);
  const auto traj = solve_parabolic(scn, grid, cfg.solver);
  write_trajectory(w, traj);
  describe_run(text, cfg, traj);
  Audit audit;
  const double tol = cfg.certify.tol.value_or(default_tolerance(traj));
  if (cfg.scenario.cls == ScenarioClass::Heat) {
    text << "[functional] V = int w^2, eps = " << format_number(cfg.certify.eps) << '\n';
    write_series(w, text, classical_heat_report(traj, scn, cfg.certify.eps));
    text << "[certify] tol = " << format_number(tol) << '\n';
    audit.check(w, traj, make_heat_clm_bound(scn, traj, cfg.certify.eps), tol);
  } else {
    GlfSpec spec{PdeClass::Parabolic, cfg.glf.p, 0.0, compute_M_parabolic(scn, grid, cfg.solver.t_end), 0.0};
    validate(spec);
    const auto sups = parabolic_sups(scn, grid, 0.0, cfg.solver.t_end);
    text << "[functional] p = " << format_number(spec.p) << '\n';
    text << "sup_f = " << format_number(sups.f) << ", sup_d1 = " << format_number(sups.d1)
         << ", sup_d2 = " << format_number(sups.d2) << '\n';
    text << "M = " << format_number(spec.M) << '\n';
    write_series(w, text, dissipation_report(traj, spec, parabolic_decay_rate(scn.c0, spec.p)));
    text << "[certify] tol = " << format_number(tol) << '\n';
    for (double q : cfg.certify.q) audit.check(w, traj, make_parabolic_bound(scn, traj, q), tol);
  }
  text << audit.text.str();
  return audit.violations;
}

inline std::size_t run_transport(const RunConfig& cfg, RunWriter& w, std::ostream& text) {
  const auto scn = make_transport(cfg.scenario);
  const auto bounds = selected_bounds(cfg);
  const bool needs_r0 = scn.assumption == LambdaAssumption::A2;
  if (needs_r0 && !cfg.certify.R0) throw DomainError("A2 scenarios need certify.R0");
  double r = 0.0;
  if (cfg.glf.r) {
    r = *cfg.glf.r;
  } else if (cfg.glf.auto_defaults) {
    r = default_transport_r(cfg.glf.p, scn.k);
  } else {
    throw DomainError("glf.r is required when glf.auto is false");
  }
  GlfSpec spec{PdeClass::Transport, cfg.glf.p, r, compute_M_transport(scn, cfg.solver.t_end), 0.0};
  validate(spec, scn);

  const auto traj = solve_transport(scn, std::get<Grid1D>(make_grid(cfg)), cfg.solver);
  write_trajectory(w, traj);
  describe_run(text, cfg, traj);
  text << "[functional] p = " << format_number(spec.p) << ", r = " << format_number(spec.r) << '\n';
  text << "M = " << format_number(spec.M) << '\n';
  double rate_lambda = scn.lambda0;
  if (needs_r0) {
    const auto local = lambda0_local(scn, *cfg.certify.R0);
    rate_lambda = local.Lambda0;
    text << "Lambda0 = " << format_number(local.Lambda0) << ", gate_radius = " << format_number(local.gate_radius)
         << '\n';
  } else {
    text << "lambda0 = " << format_number(scn.lambda0) << '\n';
  }
  write_series(w, text, dissipation_report(traj, spec, transport_decay_rate(spec.r, rate_lambda)));

  Audit audit;
  const double tol = cfg.certify.tol.value_or(default_tolerance(traj));
  text << "[certify] tol = " << format_number(tol) << '\n';
  const double q_p = spec.p + 1.0;
  for (auto kind : bounds) {
    if (kind == BoundKind::TransportP) {
      audit.check(w, traj, make_transport_bound(scn, traj, kind, q_p, spec.p, spec.r), tol);
    } else if (kind == BoundKind::TransportQ) {
      for (double q : cfg.certify.q) audit.check(w, traj, make_transport_bound(scn, traj, kind, q), tol);
    } else if (cfg.certify.variant == LissVariant::P) {
      audit.check(w, traj, make_transport_liss_bound(scn, traj, LissVariant::P, q_p, *cfg.certify.R0, spec.p, spec.r),
                  tol);
    } else {
      for (double q : cfg.certify.q) {
        audit.check(w, traj, make_transport_liss_bound(scn, traj, LissVariant::Q, q, *cfg.certify.R0), tol);
      }
    }
  }
  text << audit.text.str();
  return audit.violations;
}

inline std::size_t run_wave(const RunConfig& cfg, RunWriter& w, std::ostream& text) {
  const auto scn = make_wave(cfg.scenario);
  double r = 1.0;
  double eps = 0.0;
  if (cfg.glf.r) {
    r = *cfg.glf.r;
  } else if (!cfg.glf.auto_defaults) {
    throw DomainError("glf.r is required when glf.auto is false");
  }
  if (cfg.glf.eps) {
    eps = *cfg.glf.eps;
  } else if (cfg.glf.auto_defaults) {
    eps = default_wave_eps(scn.c, r);
  } else {
    throw DomainError("glf.eps is required when glf.auto is false");
  }
  GlfSpec spec{PdeClass::Wave, cfg.glf.p, r, compute_M_wave(scn, cfg.solver.t_end), eps};
  validate(spec, scn);

  const auto grid = std::get<Grid1D>(make_grid(cfg));
  const auto traj = solve_wave(scn, grid, cfg.solver);
  write_trajectory(w, traj);
  describe_run(text, cfg, traj);
  text << "[functional] p = " << format_number(spec.p) << ", r = " << format_number(spec.r)
       << ", eps = " << format_number(spec.eps) << '\n';
  text << "M = " << format_number(spec.M) << '\n';
  const auto slack = wave_slack(traj, scn, spec);
  write_series(w, text, dissipation_report(traj, spec, wave_decay_rate(scn.c, spec.r, spec.eps), slack));

  Audit audit;
  const double tol = cfg.certify.tol.value_or(default_tolerance(traj));
  text << "[certify] tol = " << format_number(tol) << '\n';
  for (auto kind : selected_bounds(cfg)) {
    for (double q : cfg.certify.q) {
      if (kind == BoundKind::WaveREps && std::isinf(q)) {
        audit.text << "wave_r_eps q=inf skipped: stated for finite q only\n";
        continue;
      }
      audit.check(w, traj, make_wave_bound(scn, traj, kind, q, kind == BoundKind::WaveM ? cfg.glf.m : spec.r, spec.eps),
                  tol, scn.c);
    }
  }
  text << audit.text.str();

  std::size_t violations = audit.violations;
  if (cfg.certify.absorption) {
    const double t_star = 2.0 / scn.c + 0.2;
    const double floor = 10.0 * grid.h();
    const auto it = std::find_if(traj.times.begin(), traj.times.end(),
                                 [&](double t) { return t >= t_star * (1.0 - 1e-12); });
    if (it == traj.times.end()) throw DomainError("absorption audit needs t_end >= 2/c + 0.2");
    const auto i = static_cast<std::size_t>(it - traj.times.begin());
    const auto [wt, wy] = reconstruct_wave_state(traj.primary_field(i), traj.secondary_field(i), scn.c);
    const double sup = std::max(lq_norm(wt, kInfNorm), lq_norm(wy, kInfNorm));
    const bool ok = sup <= floor;
    text << "[absorption] t = " << format_number(traj.times[i]) << " (first stamp >= 2/c + 0.2)"
         << ", sup(|w_t|, |w_y|) = " << format_number(sup) << ", floor 10h = " << format_number(floor) << ", "
         << (ok ? "below floor" : "ABOVE floor") << '\n';
    if (!ok) ++violations;
  }
  return violations;
}

}  // namespace detail

/// Runs one configuration end to end. Errors raised by the solvers or by
/// scenario validation are reported in the summary with exit code 2.
inline RunOutcome run_config(const RunConfig& cfg) {
  RunOutcome out;
  out.directory = resolve_output_dir(cfg);
  detail::RunWriter writer(out.directory, out);
  std::ostringstream text;
  try {
    switch (cfg.scenario.cls) {
      case ScenarioClass::Heat:
      case ScenarioClass::Parabolic: out.violations = detail::run_parabolic(cfg, writer, text); break;
      case ScenarioClass::Transport: out.violations = detail::run_transport(cfg, writer, text); break;
      case ScenarioClass::Wave: out.violations = detail::run_wave(cfg, writer, text); break;
    }
    out.exit_code = out.violations == 0 ? 0 : 1;
    text << "status = " << (out.exit_code == 0 ? "PASS" : "FAIL") << " (violations = " << out.violations << ")\n";
  } catch (const SolverDiverged& e) {
    out.exit_code = 2;
    text << "error: solver diverged: " << e.what() << "\nstatus = ERROR\n";
  } catch (const Error& e) {
    out.exit_code = 2;
    text << "error: " << e.what() << "\nstatus = ERROR\n";
  }
  text << kConfigEchoMarker << '\n' << echo_config(cfg);
  out.summary = text.str();
  writer.file("summary.txt", [&](std::ostream& os) { os << out.summary; });
  return out;
}

/// Extracts the config echo from a summary and parses it back.
inline RunConfig parse_summary_echo(const std::string& summary) {
  const auto pos = summary.find(kConfigEchoMarker);
  if (pos == std::string::npos) throw ConfigError("summary has no config echo", -1);
  return parse_config(summary.substr(pos + std::char_traits<char>::length(kConfigEchoMarker)));
}

}  // namespace issglf
