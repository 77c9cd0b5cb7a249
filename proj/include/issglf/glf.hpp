#pragma once

// Generalized ISS-Lyapunov functionals: truncation levels M, weighted
// G-energies, the composite V-hat of each problem class, and discrete
// dissipation residuals along stored trajectories.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "issglf/comparison.hpp"
#include "issglf/errors.hpp"
#include "issglf/fields.hpp"
#include "issglf/format.hpp"
#include "issglf/signals.hpp"
#include "issglf/solvers.hpp"
#include "issglf/trunc.hpp"

namespace issglf {

struct GlfSpec {
  PdeClass pde = PdeClass::Parabolic;
  double p = 2.0;
  double r = 0.0;    // spatial weight rate (transport, wave)
  double M = 0.0;    // truncation level
  double eps = 0.0;  // Young split (wave)
};

inline void validate_common(const GlfSpec& spec) {
  (void)TruncationPair{spec.p};
  if (!(spec.M >= 0.0) || !std::isfinite(spec.M)) throw DomainError("truncation level M must be >= 0");
}

inline void validate(const GlfSpec& spec) {
  validate_common(spec);
  if (spec.pde != PdeClass::Parabolic) {
    throw DomainError("transport and wave specs are validated against their scenario");
  }
}

/// Largest admissible weight rate for the transport functional, (p+1) ln(1/|k|).
inline double transport_r_max(double p, double k) {
  if (!(std::abs(k) < 1.0)) throw DomainError("|k| must be < 1");
  if (k == 0.0) return std::numeric_limits<double>::infinity();
  return (p + 1.0) * std::log(1.0 / std::abs(k));
}

inline void validate(const GlfSpec& spec, const TransportScenario& scn) {
  validate_common(spec);
  if (spec.pde != PdeClass::Transport) throw DomainError("spec is not a transport spec");
  const double r_max = transport_r_max(spec.p, scn.k);
  if (!(spec.r > 0.0) || spec.r > r_max * (1.0 + 1e-12)) {
    throw DomainError("transport weight rate r must satisfy 0 < r <= (p+1) ln(1/|k|) = " +
                      format_number(r_max));
  }
}

inline void validate(const GlfSpec& spec, const WaveScenario& scn) {
  validate_common(spec);
  if (spec.pde != PdeClass::Wave) throw DomainError("spec is not a wave spec");
  if (!(spec.r > 0.0) || !(spec.eps > 0.0)) throw DomainError("wave spec needs r > 0 and eps > 0");
  if (!(scn.c * spec.r - spec.eps > 0.0)) throw DomainError("wave spec needs c r - eps > 0");
}

/// Default transport rate: the largest admissible one.
inline double default_transport_r(double p, double k) {
  const double r = transport_r_max(p, k);
  if (!std::isfinite(r)) throw DomainError("k = 0 admits every r > 0; set r explicitly");
  return r;
}

/// Default wave split eps = c r / 2.
inline double default_wave_eps(double c, double r) { return 0.5 * c * r; }

namespace detail {

/// Running sup over [0, t_i] for each stamp, accumulated window by window.
inline std::vector<double> running_sups(const std::function<double(double, double)>& window_sup,
                                        std::span<const double> times) {
  std::vector<double> out(times.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t0 = i == 0 ? times[0] : times[i - 1];
    acc = std::max(acc, window_sup(t0, times[i]));
    out[i] = acc;
  }
  return out;
}

inline std::vector<Point> boundary_points(const Grid& grid, bool dirichlet) {
  const auto mesh = build_mesh(grid);
  std::vector<Point> pts;
  for (std::size_t k = 0; k < mesh.volume.size(); ++k) {
    const bool is_robin = mesh.boundary_measure[k] > 0.0;
    if (dirichlet ? mesh.dirichlet[k] != 0 : is_robin) pts.push_back(grid_point(grid, k));
  }
  return pts;
}

inline double inverse_or_zero(const MonotoneFn& fn, double y) {
  if (y == 0.0) return 0.0;
  return invert_monotone(fn, y, 0.0, fn.domain_hi(), 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, y));
}

}  // namespace detail

/// Disturbance sups entering the parabolic truncation level over [t0, t1].
struct ParabolicSups {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline ParabolicSups parabolic_sups(const ParabolicScenario& scn, const Grid& grid, double t0,
                                    double t1) {
  const auto gamma1 = detail::boundary_points(grid, true);
  const auto gamma2 = detail::boundary_points(grid, false);
  ParabolicSups s;
  s.f = sup_field(scn.f, SampleSpec{scn.dim, 64, 256}, t0, t1);
  s.d1 = sup_field_on(scn.d1, gamma1, t0, t1);
  s.d2 = sup_field_on(scn.d2, gamma2, t0, t1);
  return s;
}

/// M = phi^{-1}(sup|f|/c0) + sup|d1| + varphi^{-1}(sup|d2|).
inline double parabolic_M_from_sups(const ParabolicScenario& scn, const ParabolicSups& s) {
  if (!(scn.c0 > 0.0)) throw DomainError("truncation level needs c0 > 0");
  return detail::inverse_or_zero(scn.phi, s.f / scn.c0) + s.d1 + detail::inverse_or_zero(scn.varphi, s.d2);
}

/// Truncation level over [0, T]; the sups of d1 and d2 are taken on the grid's Gamma_1 and Gamma_2 nodes.
inline double compute_M_parabolic(const ParabolicScenario& scn, const Grid& grid, double T) {
  if (T < 0.0) throw DomainError("horizon must be nonnegative");
  return parabolic_M_from_sups(scn, parabolic_sups(scn, grid, 0.0, T));
}

inline double signal_sup(const TimeSignal& d, double T) {
  if (T < 0.0) throw DomainError("horizon must be nonnegative");
  return T > 0.0 ? sup_window(d, 0.0, T) : std::abs(d(0.0));
}

/// M = sup|d| / (1 - |k|).
inline double compute_M_transport(const TransportScenario& scn, double T) {
  if (!(std::abs(scn.k) < 1.0)) throw DomainError("|k| must be < 1");
  return signal_sup(scn.d, T) / (1.0 - std::abs(scn.k));
}

/// M = sup|d| / c.
inline double compute_M_wave(const WaveScenario& scn, double T) {
  if (!(scn.c > 0.0)) throw DomainError("wave speed c must be positive");
  return signal_sup(scn.d, T) / scn.c;
}

/// int_0^1 e^{weight_sign r y} G(shift_sign v(y) - M) dy by the grid's quadrature
/// (y is the first coordinate; 2D parabolic fields use r = 0).
inline double weighted_G_energy(std::span<const double> values, const Grid& grid, double p, double r,
                                int weight_sign, int shift_sign, double M) {
  const TruncationPair pair(p);
  if (r < 0.0) throw DomainError("weight rate must be nonnegative");
  const auto w = quadrature_weights(grid);
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double y = grid_point(grid, k)[0];
    const double weight = weight_sign == 0 ? 1.0 : std::exp(weight_sign * r * y);
    acc += w[k] * weight * pair.G(shift_sign * values[k] - M);
  }
  return acc;
}

inline double weighted_G_energy(const Field& fld, double p, double r, int weight_sign, int shift_sign,
                                double M) {
  return weighted_G_energy(fld.values, fld.grid, p, r, weight_sign, shift_sign, M);
}

/// Component terms of V-hat at one stamp; the total is their sum.
inline std::vector<double> glf_components(const Trajectory& traj, std::size_t i, const GlfSpec& spec) {
  if (traj.pde != spec.pde) throw DomainError("GLF spec class does not match the trajectory");
  const auto& u = traj.primary.at(i);
  switch (spec.pde) {
    case PdeClass::Parabolic:
      return {weighted_G_energy(u, traj.grid, spec.p, 0.0, 0, +1, spec.M),
              weighted_G_energy(u, traj.grid, spec.p, 0.0, 0, -1, spec.M)};
    case PdeClass::Transport:
      return {weighted_G_energy(u, traj.grid, spec.p, spec.r, -1, +1, spec.M),
              weighted_G_energy(u, traj.grid, spec.p, spec.r, -1, -1, spec.M)};
    case PdeClass::Wave: {
      // xi = w_t + c w_y and eta = w_t - c w_y are the stored variables.
      const auto& v = traj.secondary.at(i);
      return {weighted_G_energy(u, traj.grid, spec.p, spec.r, +1, +1, spec.M),
              weighted_G_energy(u, traj.grid, spec.p, spec.r, +1, -1, spec.M),
              weighted_G_energy(v, traj.grid, spec.p, spec.r, -1, +1, spec.M),
              weighted_G_energy(v, traj.grid, spec.p, spec.r, -1, -1, spec.M)};
    }
  }
  return {};
}

inline double glf_eval(const Trajectory& traj, std::size_t i, const GlfSpec& spec) {
  double total = 0.0;
  for (double v : glf_components(traj, i, spec)) total += v;
  return total;
}

/// Wave V-hat from (w_t, w_y) directly.
inline double glf_eval_wave(const Field& wt, const Field& wy, double c, const GlfSpec& spec) {
  if (spec.pde != PdeClass::Wave) throw DomainError("GLF spec class does not match the state");
  std::vector<double> xi(wt.values.size()), eta(wt.values.size());
  for (std::size_t j = 0; j < xi.size(); ++j) {
    xi[j] = wt.values[j] + c * wy.values[j];
    eta[j] = wt.values[j] - c * wy.values[j];
  }
  return weighted_G_energy(xi, wt.grid, spec.p, spec.r, +1, +1, spec.M) +
         weighted_G_energy(xi, wt.grid, spec.p, spec.r, +1, -1, spec.M) +
         weighted_G_energy(eta, wt.grid, spec.p, spec.r, -1, +1, spec.M) +
         weighted_G_energy(eta, wt.grid, spec.p, spec.r, -1, -1, spec.M);
}

struct GlfSeries {
  std::vector<double> times;
  std::vector<double> vhat;
  std::vector<std::vector<double>> components;
  std::vector<double> residual;  // one per interval, attached to its left stamp
  std::vector<double> envelope;  // Gronwall envelope of the decay inequality
  double decay_rate = 0.0;
  double max_residual = 0.0;
};

/// Forward-difference residual (V(t_{i+1}) - V(t_i))/dt + rate V(t_i) - slack(t_i).
inline GlfSeries dissipation_report(const Trajectory& traj, const GlfSpec& spec, double decay_rate,
                                    std::span<const double> slack) {
  if (traj.size() < 2) throw DomainError("dissipation report needs at least two stamps");
  if (slack.size() != traj.size()) throw DomainError("slack series length does not match trajectory");
  GlfSeries s;
  s.times = traj.times;
  s.decay_rate = decay_rate;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    s.components.push_back(glf_components(traj, i, spec));
    double total = 0.0;
    for (double v : s.components.back()) total += v;
    s.vhat.push_back(total);
  }
  s.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    const double res = (s.vhat[i + 1] - s.vhat[i]) / dt + decay_rate * s.vhat[i] - slack[i];
    s.residual.push_back(res);
    s.max_residual = std::max(s.max_residual, res);
  }
  const std::vector<double> phi(traj.size(), -decay_rate);
  s.envelope = gronwall_envelope(phi, slack, s.vhat.front(), std::span<const double>(traj.times));
  return s;
}

inline GlfSeries dissipation_report(const Trajectory& traj, const GlfSpec& spec, double decay_rate) {
  const std::vector<double> zero(traj.size(), 0.0);
  return dissipation_report(traj, spec, decay_rate, zero);
}

/// Wave slack 4 (p/eps)^p V_1(|f|)(t_i) at each stored stamp.
inline std::vector<double> wave_slack(const Trajectory& traj, const WaveScenario& scn, const GlfSpec& spec) {
  const auto& g = std::get<Grid1D>(traj.grid);
  const double factor = 4.0 * std::pow(spec.p / spec.eps, spec.p);
  std::vector<double> out(traj.size());
  std::vector<double> fabs(g.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    for (std::size_t j = 0; j < fabs.size(); ++j) {
      fabs[j] = std::abs(scn.f({g.position(j), 0.0}, traj.times[i]));
    }
    out[i] = factor * weighted_G_energy(fabs, traj.grid, spec.p, spec.r, +1, +1, 0.0);
  }
  return out;
}

/// Decay rate of each class: c0 (p+1), r lambda0, c r - eps.
inline double parabolic_decay_rate(double c0, double p) { return c0 * (p + 1.0); }
inline double transport_decay_rate(double r, double lambda0) { return r * lambda0; }
inline double wave_decay_rate(double c, double r, double eps) { return c * r - eps; }

struct LocalRate {
  double Lambda0;
  double gate_radius;  // 2 R0 max{1/|k|, 1/(1-|k|)}
};

/// Lambda0 = lambda(2 R0 max{1/|k|, 1/(1-|k|)}) for velocity maps under A2.
inline LocalRate lambda0_local(const TransportScenario& scn, double R0) {
  if (scn.assumption != LambdaAssumption::A2) {
    throw DomainError("Lambda0 is defined for A2 velocity maps only");
  }
  if (!(R0 > 0.0)) throw DomainError("R0 must be positive");
  if (!(std::abs(scn.k) < 1.0) || scn.k == 0.0) throw DomainError("Lambda0 needs 0 < |k| < 1");
  const double ak = std::abs(scn.k);
  const double radius = 2.0 * R0 * std::max(1.0 / ak, 1.0 / (1.0 - ak));
  return {scn.lambda(radius), radius};
}

/// Classical functional V = int w^2 for the heat baseline, with decay rate
/// pi^2/2 - eps and slack (|f(.,t)|_{L^2}^2 + d(t)^2)/eps.
inline GlfSeries classical_heat_report(const Trajectory& traj, const ParabolicScenario& scn, double eps) {
  if (traj.pde != PdeClass::Parabolic) throw DomainError("classical heat report needs a parabolic trajectory");
  const double rate = std::numbers::pi * std::numbers::pi / 2.0 - eps;
  if (!(eps > 0.0) || !(rate > 0.0)) throw DomainError("eps must lie in (0, pi^2/2)");
  const auto w = quadrature_weights(traj.grid);
  const auto gamma2 = detail::boundary_points(traj.grid, false);
  GlfSeries s;
  s.times = traj.times;
  s.decay_rate = rate;
  std::vector<double> slack(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    double v = 0.0, f2 = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double fk = scn.f(grid_point(traj.grid, k), t);
      v += w[k] * traj.primary[i][k] * traj.primary[i][k];
      f2 += w[k] * fk * fk;
    }
    double d2 = 0.0;
    for (const auto& y : gamma2) d2 = std::max(d2, std::abs(scn.d2(y, t)));
    s.vhat.push_back(v);
    s.components.push_back({v});
    slack[i] = (f2 + d2 * d2) / eps;
  }
  s.max_residual = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    const double res = (s.vhat[i + 1] - s.vhat[i]) / dt + rate * s.vhat[i] - slack[i];
    s.residual.push_back(res);
    s.max_residual = std::max(s.max_residual, res);
  }
  const std::vector<double> phi(traj.size(), -rate);
  s.envelope = gronwall_envelope(phi, slack, s.vhat.front(), std::span<const double>(traj.times));
  return s;
}

inline void write_glf_csv(std::ostream& os, const GlfSeries& s) {
  os << "t,Vhat,residual,envelope\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    os << format_number(s.times[i]) << ',' << format_number(s.vhat[i]) << ',';
    if (i < s.residual.size()) os << format_number(s.residual[i]);
    os << ',' << format_number(s.envelope[i]) << '\n';
  }
}

}  // namespace issglf
