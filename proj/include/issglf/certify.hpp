#pragma once

// Closed-form ISS / LISS bounds with explicit constants, their evaluation
// along a trajectory with running disturbance sups, and margin reports.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "issglf/errors.hpp"
#include "issglf/fields.hpp"
#include "issglf/format.hpp"
#include "issglf/glf.hpp"
#include "issglf/signals.hpp"
#include "issglf/solvers.hpp"

namespace issglf {

namespace detail {

inline void check_q(double q) {
  if (!(q >= 2.0)) throw DomainError("norm exponent q must lie in [2, inf]");
}

inline void check_nonneg(double v, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(what) + " must be nonnegative");
}

}  // namespace detail

/// 4 |w0| e^{-c0 t} + 8 M, uniform in q.
inline double bound_parabolic_q(double q, double t, double w0_norm, double M, double c0) {
  detail::check_q(q);
  if (!(c0 > 0.0)) throw DomainError("c0 must be positive");
  detail::check_nonneg(w0_norm, "initial norm");
  detail::check_nonneg(M, "truncation level");
  return 4.0 * w0_norm * std::exp(-c0 * t) + 8.0 * M;
}

/// 2 e^{r/(p+1)} |rho0| e^{-r lambda0 t/(p+1)} + 2 sup|d|, in the L^{p+1} norm.
inline double bound_transport_p(double p, double r, double t, double rho0_norm, double lambda0,
                                double sup_d) {
  if (!(p > 1.0)) throw DomainError("p must exceed 1");
  if (!(r > 0.0) || !(lambda0 > 0.0)) throw DomainError("r and lambda0 must be positive");
  return 2.0 * std::exp(r / (p + 1.0)) * rho0_norm * std::exp(-r * lambda0 * t / (p + 1.0)) +
         2.0 * sup_d;
}

/// Below this |k| the transport q-bound prefactor 2/|k| dominates every margin.
inline constexpr double kTransportConditioningK = 0.05;

/// (2/|k|) |rho0| |k|^{lambda0 t/2} + (2/(1-|k|)) sup|d|.
inline double bound_transport_q(double q, double k, double t, double rho0_norm, double lambda0,
                                double sup_d) {
  detail::check_q(q);
  const double ak = std::abs(k);
  if (k == 0.0) throw DomainError("transport q-bound degenerates at k = 0");
  if (!(ak < 1.0)) throw DomainError("|k| must be < 1");
  if (!(lambda0 > 0.0)) throw DomainError("lambda0 must be positive");
  return (2.0 / ak) * rho0_norm * std::pow(ak, lambda0 * t / 2.0) + (2.0 / (1.0 - ak)) * sup_d;
}

enum class LissVariant { P, Q };

struct LissBound {
  double value;  // NaN when the gate rejects
  bool gate;
  double Lambda0;
  double gate_radius;
};

/// LISS bound under A2: the global form with lambda0 replaced by Lambda0,
/// applicable only when rho0_norm + gate_sup_d <= R0. `exponent` is p for the
/// P variant and q for the Q variant; `r` is used by the P variant only.
inline LissBound bound_transport_liss(LissVariant variant, const TransportScenario& scn, double R0,
                                      double t, double rho0_norm, double sup_d, double gate_sup_d,
                                      double exponent, double r = 0.0) {
  const auto rate = lambda0_local(scn, R0);
  LissBound out{std::numeric_limits<double>::quiet_NaN(), rho0_norm + gate_sup_d <= R0, rate.Lambda0,
                rate.gate_radius};
  if (!out.gate) return out;
  out.value = variant == LissVariant::P
                  ? bound_transport_p(exponent, r, t, rho0_norm, rate.Lambda0, sup_d)
                  : bound_transport_q(exponent, scn.k, t, rho0_norm, rate.Lambda0, sup_d);
  return out;
}

/// 2^{(q-1)/q} [ 2^{(q+1)/q} e^{(2r-(cr-eps)t)/q} init
///             + ((q-1)/eps)^{(q-1)/q} (8 e^{2r}/(cr-eps))^{1/q} sup|f| + (2/c) sup|d| ].
inline double bound_wave_r_eps(double q, double r, double eps, double t, double init_norm_sum,
                               double sup_f, double sup_d, double c) {
  detail::check_q(q);
  if (std::isinf(q)) throw DomainError("the (r, eps) wave bound is stated for finite q only");
  if (!(c > 0.0) || !(r > 0.0) || !(eps > 0.0)) throw DomainError("c, r, eps must be positive");
  const double rate = c * r - eps;
  if (!(rate > 0.0)) throw DomainError("c r - eps must be positive");
  const double a = (q - 1.0) / q;
  const double init = std::pow(2.0, (q + 1.0) / q) * std::exp((2.0 * r - rate * t) / q) * init_norm_sum;
  const double forcing =
      std::pow((q - 1.0) / eps, a) * std::pow(8.0 * std::exp(2.0 * r) / rate, 1.0 / q) * sup_f;
  return std::pow(2.0, a) * (init + forcing + (2.0 / c) * sup_d);
}

/// 8 e^{4m/c} e^{-mt/2} init + (16/m) e^{4m/c} sup|f| + (4/c) sup|d|.
inline double bound_wave_m(double q, double m, double t, double init_norm_sum, double sup_f,
                           double sup_d, double c) {
  detail::check_q(q);
  if (!(m > 0.0)) throw DomainError("m must be positive");
  if (!(c > 0.0)) throw DomainError("c must be positive");
  const double growth = std::exp(4.0 * m / c);
  return 8.0 * growth * std::exp(-0.5 * m * t) * init_norm_sum + (16.0 / m) * growth * sup_f +
         (4.0 / c) * sup_d;
}

/// e^{-(pi^2/2 - eps) t/2} |w0| + (sup|f| + sup|d|) / sqrt(eps (pi^2/2 - eps)).
inline double heat_clm_bound(double t, double w0_norm, double eps, double sup_f, double sup_d) {
  if (!(eps > 0.0) || eps > 2.0) throw DomainError("eps must lie in (0, 2]");
  const double rate = std::numbers::pi * std::numbers::pi / 2.0 - eps;
  if (!(rate > 0.0)) throw DomainError("pi^2/2 - eps must be positive");
  return std::exp(-rate * t / 2.0) * w0_norm + (sup_f + sup_d) / std::sqrt(eps * rate);
}

enum class BoundKind { ParabolicQ, TransportP, TransportQ, TransportLiss, WaveREps, WaveM, HeatClm };

inline std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::ParabolicQ: return "parabolic_q";
    case BoundKind::TransportP: return "transport_p";
    case BoundKind::TransportQ: return "transport_q";
    case BoundKind::TransportLiss: return "transport_liss";
    case BoundKind::WaveREps: return "wave_r_eps";
    case BoundKind::WaveM: return "wave_m";
    case BoundKind::HeatClm: return "heat_clm";
  }
  return "?";
}

using NamedParams = std::vector<std::pair<std::string, double>>;

/// A bound instantiated along one trajectory: rhs[i] is the bound at times[i]
/// with disturbance sups taken over (0, t_i).
struct IssBound {
  BoundKind kind = BoundKind::ParabolicQ;
  double q = 2.0;
  NamedParams params;
  double init_norm = 0.0;
  std::vector<double> times;
  std::vector<double> rhs;
  bool applicable = true;
  std::vector<std::string> warnings;
};

struct CheckReport {
  BoundKind kind = BoundKind::ParabolicQ;
  double q = 2.0;
  double tol = 0.0;
  NamedParams params;
  bool applicable = true;
  std::vector<double> times;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margin;
  double min_margin = std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  std::vector<std::string> warnings;
};

/// The norm each bound audits: |u|_q for parabolic and transport,
/// |w_t|_q + |w_y|_q for the wave (c is the wave speed, unused otherwise).
inline std::vector<double> state_norms(const Trajectory& traj, double q, double c = 1.0) {
  std::vector<double> out(traj.size());
  const auto w = quadrature_weights(traj.grid);
  std::vector<double> wt(grid_size(traj.grid)), wy(grid_size(traj.grid));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (traj.pde != PdeClass::Wave) {
      out[i] = lq_norm(traj.primary[i], w, q);
      continue;
    }
    const auto& xi = traj.primary[i];
    const auto& eta = traj.secondary[i];
    for (std::size_t j = 0; j < xi.size(); ++j) {
      wt[j] = 0.5 * (xi[j] + eta[j]);
      wy[j] = (xi[j] - eta[j]) / (2.0 * c);
    }
    out[i] = lq_norm(wt, w, q) + lq_norm(wy, w, q);
  }
  return out;
}

/// Scheme-aware tolerances: h^2 + dt for parabolic runs, 10 h for hyperbolic runs.
inline double default_tolerance(const Trajectory& traj) {
  const double h = grid_spacing(traj.grid);
  if (traj.pde == PdeClass::Parabolic) {
    double dt = 0.0;
    for (double v : traj.dt_history) dt = std::max(dt, v);
    return h * h + dt;
  }
  return 10.0 * h;
}

inline CheckReport check_trajectory(const Trajectory& traj, double q, const IssBound& bound, double tol,
                                    double wave_c = 1.0) {
  detail::check_q(q);
  const bool wave_bound = bound.kind == BoundKind::WaveM || bound.kind == BoundKind::WaveREps;
  const bool transport_bound = bound.kind == BoundKind::TransportP || bound.kind == BoundKind::TransportQ ||
                               bound.kind == BoundKind::TransportLiss;
  const bool parabolic_bound = bound.kind == BoundKind::ParabolicQ || bound.kind == BoundKind::HeatClm;
  if ((traj.pde == PdeClass::Wave) != wave_bound || (traj.pde == PdeClass::Transport) != transport_bound ||
      (traj.pde == PdeClass::Parabolic) != parabolic_bound) {
    throw DomainError("bound kind " + std::string(to_string(bound.kind)) + " does not fit a " +
                      std::string(to_string(traj.pde)) + " trajectory");
  }
  if (bound.q != q) throw DomainError("bound was instantiated for a different q");
  if (bound.rhs.size() != traj.size()) throw DomainError("bound was instantiated on a different trajectory");
  CheckReport rep;
  rep.kind = bound.kind;
  rep.q = q;
  rep.tol = tol;
  rep.params = bound.params;
  rep.applicable = bound.applicable;
  rep.warnings = bound.warnings;
  rep.times = traj.times;
  rep.lhs = state_norms(traj, q, wave_c);
  rep.rhs = bound.rhs;
  rep.margin.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    rep.margin[i] = rep.rhs[i] - rep.lhs[i];
    if (!rep.applicable) continue;
    rep.min_margin = std::min(rep.min_margin, rep.margin[i]);
    if (rep.margin[i] < -tol) ++rep.violations;
  }
  return rep;
}

// Bound instantiation along trajectories.

/// Parabolic bound with the truncation level rebuilt from running sups.
inline IssBound make_parabolic_bound(const ParabolicScenario& scn, const Trajectory& traj, double q) {
  IssBound b;
  b.kind = BoundKind::ParabolicQ;
  b.q = q;
  b.times = traj.times;
  b.init_norm = lq_norm(traj.primary_field(0), q);
  b.params = {{"q", q}, {"c0", scn.c0}, {"w0_norm", b.init_norm}};
  ParabolicSups acc;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t0 = i == 0 ? 0.0 : traj.times[i - 1];
    const auto s = parabolic_sups(scn, traj.grid, t0, traj.times[i]);
    acc.f = std::max(acc.f, s.f);
    acc.d1 = std::max(acc.d1, s.d1);
    acc.d2 = std::max(acc.d2, s.d2);
    const double M = parabolic_M_from_sups(scn, acc);
    b.rhs.push_back(bound_parabolic_q(q, traj.times[i], b.init_norm, M, scn.c0));
  }
  b.params.emplace_back("M", parabolic_M_from_sups(scn, acc));
  return b;
}

/// Classical heat bound in L^2; sup|f| is the space-time sup, which dominates sup_t |f(.,t)|_{L^2}.
inline IssBound make_heat_clm_bound(const ParabolicScenario& scn, const Trajectory& traj, double eps) {
  IssBound b;
  b.kind = BoundKind::HeatClm;
  b.q = 2.0;
  b.times = traj.times;
  b.init_norm = lq_norm(traj.primary_field(0), 2.0);
  const auto gamma2 = detail::boundary_points(traj.grid, false);
  const auto sup_f = detail::running_sups(
      [&](double t0, double t1) { return sup_field(scn.f, SampleSpec{scn.dim, 64, 256}, t0, t1); },
      traj.times);
  const auto sup_d = detail::running_sups(
      [&](double t0, double t1) { return sup_field_on(scn.d2, gamma2, t0, t1); }, traj.times);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    b.rhs.push_back(heat_clm_bound(traj.times[i], b.init_norm, eps, sup_f[i], sup_d[i]));
  }
  b.params = {{"eps", eps}, {"w0_norm", b.init_norm}, {"sup_f", sup_f.back()}, {"sup_d", sup_d.back()}};
  return b;
}

inline std::vector<double> running_signal_sups(const TimeSignal& d, const std::vector<double>& times) {
  return detail::running_sups(
      [&](double t0, double t1) { return t1 > t0 ? sup_window(d, t0, t1) : std::abs(d(t0)); }, times);
}

inline void add_conditioning_warning(IssBound& b, double k) {
  if (std::abs(k) < kTransportConditioningK) {
    b.warnings.push_back("|k| = " + format_number(std::abs(k)) +
                         " < 0.05: the 2/|k| prefactor makes the q-bound poorly conditioned");
  }
}

/// Global transport bounds under A1 (P variant audits the L^{p+1} norm, so q = p + 1).
inline IssBound make_transport_bound(const TransportScenario& scn, const Trajectory& traj, BoundKind kind,
                                     double q, double p = 2.0, double r = 0.0) {
  if (scn.assumption != LambdaAssumption::A1) throw DomainError("global transport bounds need A1");
  IssBound b;
  b.kind = kind;
  b.q = q;
  b.times = traj.times;
  b.init_norm = lq_norm(traj.primary_field(0), q);
  const auto sup_d = running_signal_sups(scn.d, traj.times);
  if (kind == BoundKind::TransportP) {
    if (std::abs(q - (p + 1.0)) > 1e-12) throw DomainError("the p-bound audits the L^{p+1} norm");
    b.params = {{"p", p}, {"r", r}, {"lambda0", scn.lambda0}, {"rho0_norm", b.init_norm}};
    for (std::size_t i = 0; i < traj.size(); ++i) {
      b.rhs.push_back(bound_transport_p(p, r, traj.times[i], b.init_norm, scn.lambda0, sup_d[i]));
    }
  } else if (kind == BoundKind::TransportQ) {
    b.params = {{"q", q}, {"k", scn.k}, {"lambda0", scn.lambda0}, {"rho0_norm", b.init_norm}};
    add_conditioning_warning(b, scn.k);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      b.rhs.push_back(bound_transport_q(q, scn.k, traj.times[i], b.init_norm, scn.lambda0, sup_d[i]));
    }
  } else {
    throw DomainError("use make_transport_liss_bound for the local bound");
  }
  b.params.emplace_back("sup_d", sup_d.back());
  return b;
}

/// Local bound under A2; the gate uses the sup of |d| over the whole run horizon.
inline IssBound make_transport_liss_bound(const TransportScenario& scn, const Trajectory& traj,
                                          LissVariant variant, double q, double R0, double p = 2.0,
                                          double r = 0.0) {
  IssBound b;
  b.kind = BoundKind::TransportLiss;
  b.q = q;
  b.times = traj.times;
  if (variant == LissVariant::P && std::abs(q - (p + 1.0)) > 1e-12) {
    throw DomainError("the p-bound audits the L^{p+1} norm");
  }
  b.init_norm = lq_norm(traj.primary_field(0), q);
  const auto sup_d = running_signal_sups(scn.d, traj.times);
  const double gate_sup = sup_d.back();
  const double exponent = variant == LissVariant::P ? p : q;
  LissBound last{};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    last = bound_transport_liss(variant, scn, R0, traj.times[i], b.init_norm, sup_d[i], gate_sup, exponent, r);
    b.rhs.push_back(last.value);
  }
  b.applicable = last.gate;
  b.params = {{"q", q},
              {"R0", R0},
              {"Lambda0", last.Lambda0},
              {"gate_radius", last.gate_radius},
              {"gate_value", b.init_norm + gate_sup},
              {"rho0_norm", b.init_norm},
              {"sup_d", gate_sup}};
  if (variant == LissVariant::Q) add_conditioning_warning(b, scn.k);
  return b;
}

/// Wave bounds on |w_t|_q + |w_y|_q; the initial term uses the discrete phi0 and w0_y.
inline IssBound make_wave_bound(const WaveScenario& scn, const Trajectory& traj, BoundKind kind, double q,
                                double m_or_r, double eps = 0.0) {
  IssBound b;
  b.kind = kind;
  b.q = q;
  b.times = traj.times;
  const auto& g = std::get<Grid1D>(traj.grid);
  const auto [vel, wy] = wave_initial_derivatives(scn, g);
  const auto w = quadrature_weights(traj.grid);
  b.init_norm = lq_norm(vel, w, q) + lq_norm(wy, w, q);
  const auto sup_d = running_signal_sups(scn.d, traj.times);
  const auto sup_f = detail::running_sups(
      [&](double t0, double t1) { return sup_field(scn.f, SampleSpec{1, 64, 256}, t0, t1); }, traj.times);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    b.rhs.push_back(kind == BoundKind::WaveM
                        ? bound_wave_m(q, m_or_r, t, b.init_norm, sup_f[i], sup_d[i], scn.c)
                        : bound_wave_r_eps(q, m_or_r, eps, t, b.init_norm, sup_f[i], sup_d[i], scn.c));
  }
  if (kind == BoundKind::WaveM) {
    b.params = {{"q", q}, {"m", m_or_r}, {"c", scn.c}};
  } else if (kind == BoundKind::WaveREps) {
    b.params = {{"q", q}, {"r", m_or_r}, {"eps", eps}, {"c", scn.c}};
  } else {
    throw DomainError("not a wave bound kind");
  }
  b.params.emplace_back("init_norm_sum", b.init_norm);
  b.params.emplace_back("sup_f", sup_f.back());
  b.params.emplace_back("sup_d", sup_d.back());
  return b;
}

inline void write_check_csv(std::ostream& os, const CheckReport& rep) {
  os << "t,lhs,rhs,margin\n";
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    os << format_number(rep.times[i]) << ',' << format_number(rep.lhs[i]) << ','
       << format_number(rep.rhs[i]) << ',' << format_number(rep.margin[i]) << '\n';
  }
}

/// One-line summary: kind, q, tol, min margin, violations, then the parameter echo.
inline std::string summary_line(const CheckReport& rep) {
  std::string s = std::string(to_string(rep.kind)) + " q=" + format_number(rep.q) +
                  " tol=" + format_number(rep.tol);
  if (rep.applicable) {
    s += " min_margin=" + format_number(rep.min_margin) + " violations=" + std::to_string(rep.violations);
  } else {
    s += " not-applicable";
  }
  for (const auto& [k, v] : rep.params) s += " " + k + "=" + format_number(v);
  return s;
}

}  // namespace issglf
