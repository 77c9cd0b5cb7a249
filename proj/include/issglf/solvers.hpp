#pragma once

// Time integration of the three model problems:
//   parabolic  w_t = div(a grad w) - c phi(w) - h(y,t,w) + f, mixed Dirichlet/Robin boundary
//   transport  rho_t + (lambda(W) rho)_y = 0, rho(0,t) = k rho(1,t) + d(t)
//   wave       w_tt = c^2 w_yy + f, w(0,t) = 0, w_y(1,t) = -k w_t(1,t) + d(t), ck = 1
//
// Parabolic: node-centered finite volumes, implicit diffusion, explicit
// reaction/absorption/source, nonlinear Robin flux solved per step.
// Hyperbolic: first-order upwind (conservative for transport, on the
// characteristic pair for the wave).

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "issglf/comparison.hpp"
#include "issglf/errors.hpp"
#include "issglf/fields.hpp"
#include "issglf/signals.hpp"

namespace issglf {

struct SolverConfig {
  double dt = 0.0;          // parabolic step
  double cfl_sigma = 0.9;   // hyperbolic CFL safety factor
  double t_end = 1.0;
  double bc_tol = 1e-10;    // Robin boundary bisection tolerance
  int output_stride = 1;    // store every m-th step (the final step is always stored)

  bool operator==(const SolverConfig&) const = default;
};

inline void validate(const SolverConfig& cfg) {
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw DomainError("t_end must be positive");
  if (!(cfg.cfl_sigma > 0.0) || cfg.cfl_sigma > 1.0) throw DomainError("cfl_sigma must lie in (0, 1]");
  if (!(cfg.bc_tol > 0.0)) throw DomainError("bc_tol must be positive");
  if (cfg.output_stride < 1) throw DomainError("output_stride must be at least 1");
}

using HTerm = std::function<double(const Point&, double, double)>;
using InitialData = std::function<double(const Point&)>;

inline MonotoneFn identity_map(std::string label, double span = 1e3) {
  return MonotoneFn([](double v) { return v; }, -span, span, std::move(label), true);
}

struct ParabolicScenario {
  std::string id = "parabolic";
  int dim = 1;
  SpaceTimeField a = SpaceTimeField::constant(1.0);
  SpaceTimeField c = SpaceTimeField::constant(1.0);
  double a0 = 1.0;
  double c0 = 1.0;
  MonotoneFn phi = identity_map("phi");
  HTerm h_term;  // empty means h = 0
  MonotoneFn varphi = identity_map("varphi");
  SpaceTimeField f;
  SpaceTimeField d1;
  SpaceTimeField d2;
  InitialData w0 = [](const Point&) { return 0.0; };
  // The classical heat baseline has c = 0; it skips the reaction-weight checks.
  bool reaction_free = false;
};

namespace detail {

inline std::vector<double> sample_values(double span, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = -span + 2.0 * span * static_cast<double>(i) / (n - 1);
  return v;
}

inline std::vector<Point> sample_points(int dim, int n) { return lattice_points(dim, n); }

inline void check_odd_dominance(const MonotoneFn& fn, const char* name) {
  const double span = std::min({10.0, std::abs(fn.domain_lo()), std::abs(fn.domain_hi())});
  for (double v : sample_values(span, 201)) {
    const double fv = fn(v);
    if (fv * v < -1e-12 * (1.0 + std::abs(v))) {
      throw AssumptionViolation(std::string(name) + "(v) v >= 0 fails at v = " + std::to_string(v));
    }
    if (v > 0.0 && fn(-v) > -fv + 1e-12 * (1.0 + std::abs(fv))) {
      throw AssumptionViolation(std::string(name) + "(-v) <= -" + name + "(v) fails at v = " +
                                std::to_string(v));
    }
  }
}

}  // namespace detail

/// Sampled checks of the structural conditions on phi, h, varphi, a and c over [0, t_end].
inline void validate(const ParabolicScenario& scn, double t_end) {
  if (scn.dim != 1 && scn.dim != 2) throw DomainError("parabolic dimension must be 1 or 2");
  if (!(scn.a0 > 0.0)) throw AssumptionViolation("a0 must be positive");
  if (!scn.reaction_free && !(scn.c0 > 0.0)) throw AssumptionViolation("c0 must be positive");
  detail::check_odd_dominance(scn.phi, "phi");
  detail::check_odd_dominance(scn.varphi, "varphi");
  const double span = std::min({10.0, std::abs(scn.phi.domain_lo()), scn.phi.domain_hi()});
  const double delta = 1e-4;
  for (double v : detail::sample_values(span - delta, 201)) {
    const double slope = (scn.phi(v + delta) - scn.phi(v - delta)) / (2.0 * delta);
    if (slope < 1.0 - 1e-6) {
      throw AssumptionViolation("phi' >= 1 fails at v = " + std::to_string(v));
    }
  }
  const auto pts = detail::sample_points(scn.dim, 16);
  const auto vs = detail::sample_values(10.0, 41);
  for (int it = 0; it <= 8; ++it) {
    const double t = t_end * it / 8.0;
    for (const auto& y : pts) {
      if (scn.a(y, t) < scn.a0 - 1e-12) throw AssumptionViolation("a(y,t) >= a0 fails");
      if (!scn.reaction_free && scn.c(y, t) < scn.c0 - 1e-12) {
        throw AssumptionViolation("c(y,t) >= c0 fails");
      }
      if (scn.h_term) {
        for (double v : vs) {
          if (scn.h_term(y, t, v) * v < -1e-12 * (1.0 + std::abs(v))) {
            throw AssumptionViolation("h(y,t,v) v >= 0 fails at v = " + std::to_string(v));
          }
        }
      }
    }
  }
}

namespace detail {

/// Node-centered finite-volume geometry for the parabolic solver.
struct FvMesh {
  struct Face {
    std::size_t a;
    std::size_t b;
    double geom;  // conductance = face-averaged diffusivity * geom
  };
  std::vector<double> volume;
  std::vector<double> boundary_measure;  // > 0 only at Robin nodes
  std::vector<char> dirichlet;
  std::vector<Face> faces;
};

inline FvMesh build_mesh(const Grid& grid) {
  FvMesh m;
  const std::size_t n = grid_size(grid);
  m.volume.assign(n, 0.0);
  m.boundary_measure.assign(n, 0.0);
  m.dirichlet.assign(n, 0);
  if (const auto* g = std::get_if<Grid1D>(&grid)) {
    if (g->layout != Layout::Node) throw DomainError("parabolic solver needs a node-centered grid");
    const double h = g->h();
    for (std::size_t j = 0; j < n; ++j) m.volume[j] = (j == 0 || j + 1 == n) ? 0.5 * h : h;
    for (std::size_t j = 0; j + 1 < n; ++j) m.faces.push_back({j, j + 1, 1.0 / h});
    auto mark = [&](std::size_t j, BoundaryKind kind) {
      if (kind == BoundaryKind::Dirichlet) {
        m.dirichlet[j] = 1;
      } else {
        m.boundary_measure[j] = 1.0;
      }
    };
    mark(0, g->left);
    mark(n - 1, g->right);
    return m;
  }
  const auto& g = std::get<Grid2D>(grid);
  auto wx = [&](int i) { return (i == 0 || i == g.nx) ? 0.5 * g.hx() : g.hx(); };
  auto wy = [&](int j) { return (j == 0 || j == g.ny) ? 0.5 * g.hy() : g.hy(); };
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      m.volume[k] = wx(i) * wy(j);
      if (i < g.nx) m.faces.push_back({k, g.index(i + 1, j), wy(j) / g.hx()});
      if (j < g.ny) m.faces.push_back({k, g.index(i, j + 1), wx(i) / g.hy()});
      // Edge memberships; a corner touching any Dirichlet edge is Dirichlet.
      bool any_dirichlet = false;
      double measure = 0.0;
      auto touch = [&](bool on, Edge e, double width) {
        if (!on) return;
        if (g.edges[e] == BoundaryKind::Dirichlet) {
          any_dirichlet = true;
        } else {
          measure += width;
        }
      };
      touch(i == 0, kLeft, wy(j));
      touch(i == g.nx, kRight, wy(j));
      touch(j == 0, kBottom, wx(i));
      touch(j == g.ny, kTop, wx(i));
      if (any_dirichlet) {
        m.dirichlet[k] = 1;
      } else {
        m.boundary_measure[k] = measure;
      }
    }
  }
  return m;
}

/// Solve x + b * fn(x) = rhs for b >= 0 by bracketed bisection.
inline double solve_scalar_robin(const MonotoneFn& fn, double b, double rhs, double tol) {
  auto resid = [&](double x) { return x + b * fn(x) - rhs; };
  double width = std::max(1.0, std::abs(rhs));
  double lo = rhs - width;
  double hi = rhs + width;
  for (int it = 0; resid(lo) > 0.0; ++it) {
    if (it > 200) throw SolverDiverged("Robin bracket expansion failed", 0);
    width *= 2.0;
    lo = rhs - width;
  }
  for (int it = 0; resid(hi) < 0.0; ++it) {
    if (it > 200) throw SolverDiverged("Robin bracket expansion failed", 0);
    width *= 2.0;
    hi = rhs + width;
  }
  for (int it = 0; it < 300 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double rm = resid(mid);
    if (rm == 0.0) return mid;
    if (rm > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::size_t step_count(double t_end, double dt) {
  const double raw = t_end / dt;
  auto n = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
  return std::max<std::size_t>(n, 1);
}

}  // namespace detail

/// Semi-implicit finite-volume solve on [0, cfg.t_end] with time stamps t_n = n dt.
inline Trajectory solve_parabolic(const ParabolicScenario& scn, const Grid& grid,
                                  const SolverConfig& cfg) {
  validate(cfg);
  if (!(cfg.dt > 0.0)) throw DomainError("parabolic solver needs dt > 0");
  if (grid_dim(grid) != scn.dim) throw DomainError("grid dimension does not match scenario");

  const auto mesh = detail::build_mesh(grid);
  const std::size_t n = grid_size(grid);
  std::vector<Point> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = grid_point(grid, k);
  std::vector<std::size_t> robin;
  for (std::size_t k = 0; k < n; ++k) {
    if (mesh.boundary_measure[k] > 0.0) robin.push_back(k);
  }

  Trajectory traj;
  traj.pde = PdeClass::Parabolic;
  traj.scenario_id = scn.id;
  traj.grid = grid;
  traj.scheme = "fv-implicit-diffusion/explicit-reaction";

  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = scn.w0(pts[k]);
  traj.append(0.0, w);

  using SpMat = Eigen::SparseMatrix<double>;
  Eigen::SparseLU<SpMat> lu;
  Eigen::MatrixXd U;  // columns A^{-1} e_b S_b for Robin nodes b
  Eigen::MatrixXd B;  // U restricted to Robin rows
  double cached_dt = -1.0;
  bool have_factor = false;

  auto assemble = [&](double dt, double t_coef) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n + 4 * mesh.faces.size());
    std::vector<double> diag(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) diag[k] = mesh.volume[k] / dt;
    for (const auto& face : mesh.faces) {
      const double af = 0.5 * (scn.a(pts[face.a], t_coef) + scn.a(pts[face.b], t_coef));
      const double kf = af * face.geom;
      if (!mesh.dirichlet[face.a]) {
        diag[face.a] += kf;
        trip.emplace_back(face.a, face.b, -kf);
      }
      if (!mesh.dirichlet[face.b]) {
        diag[face.b] += kf;
        trip.emplace_back(face.b, face.a, -kf);
      }
    }
    for (std::size_t k = 0; k < n; ++k) trip.emplace_back(k, k, mesh.dirichlet[k] ? 1.0 : diag[k]);
    SpMat A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) return false;
    const auto nr = static_cast<Eigen::Index>(robin.size());
    U.resize(static_cast<Eigen::Index>(n), nr);
    B.resize(nr, nr);
    for (Eigen::Index b = 0; b < nr; ++b) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      e(static_cast<Eigen::Index>(robin[b])) = mesh.boundary_measure[robin[b]];
      U.col(b) = lu.solve(e);
    }
    for (Eigen::Index a = 0; a < nr; ++a) B.row(a) = U.row(static_cast<Eigen::Index>(robin[a]));
    return true;
  };

  const std::size_t steps = detail::step_count(cfg.t_end, cfg.dt);
  const bool frozen_a = scn.a.time_invariant();
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  std::vector<double> x(robin.size());
  std::vector<double> phi_x(robin.size());
  double t = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t_next = step == steps ? cfg.t_end : static_cast<double>(step) * cfg.dt;
    const double dt = t_next - t;
    if (!have_factor || !frozen_a || dt != cached_dt) {
      if (!assemble(dt, frozen_a ? 0.0 : t_next)) {
        throw SolverDiverged("sparse factorization failed", step);
      }
      have_factor = true;
      cached_dt = dt;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      if (mesh.dirichlet[k]) {
        rhs(kk) = scn.d1(pts[k], t_next);
        continue;
      }
      double src = scn.f(pts[k], t) - scn.c(pts[k], t) * scn.phi(w[k]);
      if (scn.h_term) src -= scn.h_term(pts[k], t, w[k]);
      rhs(kk) = mesh.volume[k] * (w[k] / dt + src);
      if (mesh.boundary_measure[k] > 0.0) {
        rhs(kk) += mesh.boundary_measure[k] * scn.d2(pts[k], t_next);
      }
    }
    Eigen::VectorXd u0 = lu.solve(rhs);
    Eigen::VectorXd sol = u0;
    if (!robin.empty()) {
      // w_R = u0_R - B varphi(w_R) by nonlinear Gauss-Seidel, each node by bisection.
      for (std::size_t b = 0; b < robin.size(); ++b) {
        x[b] = w[robin[b]];
        phi_x[b] = scn.varphi(x[b]);
      }
      bool converged = false;
      for (int sweep = 0; sweep < 500 && !converged; ++sweep) {
        double change = 0.0;
        for (std::size_t b = 0; b < robin.size(); ++b) {
          const auto bi = static_cast<Eigen::Index>(b);
          double s = u0(static_cast<Eigen::Index>(robin[b]));
          for (std::size_t a = 0; a < robin.size(); ++a) {
            if (a != b) s -= B(bi, static_cast<Eigen::Index>(a)) * phi_x[a];
          }
          const double xb = detail::solve_scalar_robin(scn.varphi, B(bi, bi), s, cfg.bc_tol);
          change = std::max(change, std::abs(xb - x[b]));
          x[b] = xb;
          phi_x[b] = scn.varphi(xb);
        }
        converged = change <= cfg.bc_tol || robin.size() == 1;
      }
      if (!converged) {
        throw SolverDiverged("Robin boundary iteration did not converge", step);
      }
      Eigen::VectorXd pv(static_cast<Eigen::Index>(robin.size()));
      for (std::size_t b = 0; b < robin.size(); ++b) pv(static_cast<Eigen::Index>(b)) = phi_x[b];
      sol -= U * pv;
    }
    for (std::size_t k = 0; k < n; ++k) {
      w[k] = sol(static_cast<Eigen::Index>(k));
      if (!std::isfinite(w[k])) throw SolverDiverged("non-finite parabolic state", step);
    }
    traj.dt_history.push_back(dt);
    t = t_next;
    if (step % static_cast<std::size_t>(cfg.output_stride) == 0 || step == steps) traj.append(t, w);
  }
  return traj;
}

/// Classical heat setup: w_t = w_yy + f, w(0) = 0, w_y(1) = -w(1) + d.
inline ParabolicScenario make_heat_scenario(SpaceTimeField f, TimeSignal d, InitialData w0) {
  ParabolicScenario scn;
  scn.id = "heat_clm";
  scn.dim = 1;
  scn.c = SpaceTimeField::constant(0.0);
  scn.c0 = 0.0;
  scn.reaction_free = true;
  scn.f = std::move(f);
  scn.d1 = SpaceTimeField::constant(0.0);
  scn.d2 = SpaceTimeField::from_signal(std::move(d));
  scn.w0 = std::move(w0);
  return scn;
}

enum class LambdaAssumption { A1, A2 };

inline std::string_view to_string(LambdaAssumption a) { return a == LambdaAssumption::A1 ? "A1" : "A2"; }

struct TransportScenario {
  std::string id = "transport";
  std::function<double(double)> lambda = [](double) { return 1.0; };
  LambdaAssumption assumption = LambdaAssumption::A1;
  double lambda0 = 1.0;  // lower bound under A1
  double k = 0.5;
  TimeSignal d;
  InitialData rho0 = [](const Point&) { return 0.0; };
};

inline void validate(const TransportScenario& scn) {
  if (!(std::abs(scn.k) < 1.0)) throw DomainError("|k| must be < 1");
  if (!scn.lambda) throw DomainError("transport velocity map is missing");
  const auto ss = detail::sample_values(50.0, 2001);
  if (scn.assumption == LambdaAssumption::A1) {
    if (!(scn.lambda0 > 0.0)) throw AssumptionViolation("A1 requires lambda0 > 0");
    for (double s : ss) {
      if (scn.lambda(s) < scn.lambda0 - 1e-12) {
        throw AssumptionViolation("A1 lambda(s) >= lambda0 fails at s = " + std::to_string(s));
      }
    }
    return;
  }
  double prev = scn.lambda(0.0);
  for (double s : ss) {
    const double v = scn.lambda(s);
    if (!(v > 0.0)) throw AssumptionViolation("lambda must be positive");
    if (s < 0.0 && v < scn.lambda(-s) - 1e-12) {
      throw AssumptionViolation("A2 lambda(s) >= lambda(|s|) fails at s = " + std::to_string(s));
    }
    if (s > 0.0) {
      if (v > prev + 1e-12) throw AssumptionViolation("A2 lambda must be nonincreasing on s >= 0");
      prev = v;
    }
  }
}

/// Conservative upwind with constant-in-space speed lambda(W(t)); dt chosen
/// each step so that lambda dt / h = sigma (shorter final step).
inline Trajectory solve_transport(const TransportScenario& scn, const Grid1D& grid,
                                  const SolverConfig& cfg) {
  validate(cfg);
  validate(scn);
  if (grid.layout != Layout::Cell) throw DomainError("transport solver needs a cell-centered grid");
  const std::size_t n = grid.size();
  const double h = grid.h();

  Trajectory traj;
  traj.pde = PdeClass::Transport;
  traj.scenario_id = scn.id;
  traj.grid = grid;
  traj.scheme = "upwind-conservative";

  std::vector<double> rho(n);
  for (std::size_t j = 0; j < n; ++j) rho[j] = scn.rho0({grid.position(j), 0.0});
  traj.append(0.0, rho);

  double t = 0.0;
  std::size_t step = 0;
  while (t < cfg.t_end) {
    ++step;
    double mass = 0.0;
    for (double v : rho) mass += v * h;
    const double lam = scn.lambda(mass);
    if (!(lam > 0.0) || !std::isfinite(lam)) {
      throw AssumptionViolation("lambda(W) = " + std::to_string(lam) + " is not positive");
    }
    double dt = cfg.cfl_sigma * h / lam;
    bool last = false;
    if (t + dt >= cfg.t_end * (1.0 - 1e-12)) {
      dt = cfg.t_end - t;
      last = true;
    }
    const double nu = lam * dt / h;
    const double inflow = scn.k * rho[n - 1] + scn.d(t);
    for (std::size_t j = n - 1; j > 0; --j) rho[j] = (1.0 - nu) * rho[j] + nu * rho[j - 1];
    rho[0] = (1.0 - nu) * rho[0] + nu * inflow;
    for (double v : rho) {
      if (!std::isfinite(v)) throw SolverDiverged("non-finite transport state", step);
    }
    traj.dt_history.push_back(dt);
    t = last ? cfg.t_end : t + dt;
    if (step % static_cast<std::size_t>(cfg.output_stride) == 0 || last) traj.append(t, rho);
    if (last) break;
  }
  return traj;
}

struct WaveScenario {
  std::string id = "wave";
  double c = 1.0;
  SpaceTimeField f;
  TimeSignal d;
  InitialData w0 = [](const Point&) { return 0.0; };
  InitialData phi0 = [](const Point&) { return 0.0; };

  double k() const { return 1.0 / c; }
};

inline void validate(const WaveScenario& scn) {
  if (!(scn.c > 0.0) || !std::isfinite(scn.c)) throw DomainError("wave speed c must be positive");
  if (std::abs(scn.w0({0.0, 0.0})) > 1e-12) throw AssumptionViolation("w0(0) must vanish");
}

/// phi0 samples and the w0 gradient (centered inside, one-sided second order at the ends).
inline std::pair<std::vector<double>, std::vector<double>> wave_initial_derivatives(
    const WaveScenario& scn, const Grid1D& grid) {
  if (grid.layout != Layout::Node) throw DomainError("wave solver needs a node-centered grid");
  const std::size_t n = grid.size();
  const double h = grid.h();
  std::vector<double> w(n), vel(n), wy(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = scn.w0({grid.position(j), 0.0});
    vel[j] = scn.phi0({grid.position(j), 0.0});
  }
  for (std::size_t j = 1; j + 1 < n; ++j) wy[j] = (w[j + 1] - w[j - 1]) / (2.0 * h);
  wy[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * h);
  wy[n - 1] = (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * h);
  return {std::move(vel), std::move(wy)};
}

/// Upwind on xi = w_t + c w_y (moves left) and eta = w_t - c w_y (moves right).
/// Closures xi(1,t) = c d(t) and eta(0,t) = -xi(0,t) are imposed at every stamp, t = 0 included.
inline Trajectory solve_wave(const WaveScenario& scn, const Grid1D& grid, const SolverConfig& cfg) {
  validate(cfg);
  validate(scn);
  const auto [vel, wy] = wave_initial_derivatives(scn, grid);
  const std::size_t n = grid.size();
  const std::size_t last_node = n - 1;
  const double h = grid.h();
  const double c = scn.c;

  Trajectory traj;
  traj.pde = PdeClass::Wave;
  traj.scenario_id = scn.id;
  traj.grid = grid;
  traj.scheme = "upwind-characteristic";

  std::vector<double> xi(n), eta(n);
  for (std::size_t j = 0; j < n; ++j) {
    xi[j] = vel[j] + c * wy[j];
    eta[j] = vel[j] - c * wy[j];
  }
  xi[last_node] = c * scn.d(0.0);
  eta[0] = -xi[0];
  traj.append(0.0, xi, eta);

  const double dt_cfl = cfg.cfl_sigma * h / c;
  const std::size_t steps = detail::step_count(cfg.t_end, dt_cfl);
  std::vector<double> src(n), xi_new(n), eta_new(n);
  double t = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t_next = step == steps ? cfg.t_end : static_cast<double>(step) * dt_cfl;
    const double dt = t_next - t;
    const double nu = c * dt / h;
    for (std::size_t j = 0; j < n; ++j) src[j] = scn.f({grid.position(j), 0.0}, t);
    for (std::size_t j = 0; j < last_node; ++j) {
      xi_new[j] = xi[j] + nu * (xi[j + 1] - xi[j]) + dt * src[j];
    }
    xi_new[last_node] = c * scn.d(t_next);
    for (std::size_t j = 1; j < n; ++j) {
      eta_new[j] = eta[j] - nu * (eta[j] - eta[j - 1]) + dt * src[j];
    }
    eta_new[0] = -xi_new[0];
    xi.swap(xi_new);
    eta.swap(eta_new);
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(xi[j]) || !std::isfinite(eta[j])) {
        throw SolverDiverged("non-finite wave state", step);
      }
    }
    traj.dt_history.push_back(dt);
    t = t_next;
    if (step % static_cast<std::size_t>(cfg.output_stride) == 0 || step == steps) {
      traj.append(t, xi, eta);
    }
  }
  return traj;
}

/// w_t = (xi + eta)/2, w_y = (xi - eta)/(2c).
inline std::pair<Field, Field> reconstruct_wave_state(const Field& xi, const Field& eta, double c) {
  if (!(c > 0.0)) throw DomainError("wave speed c must be positive");
  if (!(xi.grid == eta.grid)) throw DomainError("characteristic fields live on different grids");
  std::vector<double> wt(xi.values.size()), wy(xi.values.size());
  for (std::size_t j = 0; j < wt.size(); ++j) {
    wt[j] = 0.5 * (xi.values[j] + eta.values[j]);
    wy[j] = (xi.values[j] - eta.values[j]) / (2.0 * c);
  }
  return {Field(xi.grid, std::move(wt), xi.t), Field(xi.grid, std::move(wy), xi.t)};
}

}  // namespace issglf
