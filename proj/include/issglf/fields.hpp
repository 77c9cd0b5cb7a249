#pragma once

// Grids on the unit interval and unit square, grid functions, trajectories
// and the L^q norms used by the solvers and by certification.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "issglf/errors.hpp"
#include "issglf/format.hpp"
#include "issglf/signals.hpp"

namespace issglf {

enum class Layout { Node, Cell };

/// Dirichlet marks Gamma_1, Robin marks Gamma_2.
enum class BoundaryKind { Dirichlet, Robin };

inline std::string_view to_string(Layout l) { return l == Layout::Node ? "node" : "cell"; }
inline std::string_view to_string(BoundaryKind b) {
  return b == BoundaryKind::Dirichlet ? "dirichlet" : "robin";
}

struct Grid1D {
  int n = 64;
  Layout layout = Layout::Node;
  BoundaryKind left = BoundaryKind::Dirichlet;
  BoundaryKind right = BoundaryKind::Robin;

  Grid1D() = default;
  Grid1D(int n_, Layout layout_, BoundaryKind left_ = BoundaryKind::Dirichlet,
         BoundaryKind right_ = BoundaryKind::Robin)
      : n(n_), layout(layout_), left(left_), right(right_) {
    if (n < 8) throw DomainError("1D grid needs at least 8 cells");
  }

  double h() const { return 1.0 / n; }
  std::size_t size() const { return layout == Layout::Node ? n + 1 : n; }
  double position(std::size_t j) const {
    return layout == Layout::Node ? static_cast<double>(j) / n : (static_cast<double>(j) + 0.5) / n;
  }
  bool operator==(const Grid1D&) const = default;
};

enum Edge : int { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

/// Node-centered grid on the unit square; each edge is labeled Gamma_1 or Gamma_2.
struct Grid2D {
  int nx = 32;
  int ny = 32;
  std::array<BoundaryKind, 4> edges{BoundaryKind::Dirichlet, BoundaryKind::Robin,
                                    BoundaryKind::Dirichlet, BoundaryKind::Robin};

  Grid2D() = default;
  Grid2D(int nx_, int ny_, std::array<BoundaryKind, 4> edges_) : nx(nx_), ny(ny_), edges(edges_) {
    if (nx < 8 || ny < 8) throw DomainError("2D grid needs at least 8 cells per direction");
  }

  double hx() const { return 1.0 / nx; }
  double hy() const { return 1.0 / ny; }
  std::size_t size() const { return static_cast<std::size_t>(nx + 1) * (ny + 1); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * (nx + 1) + i; }
  Point position(std::size_t k) const {
    const auto i = static_cast<int>(k % (nx + 1));
    const auto j = static_cast<int>(k / (nx + 1));
    return {static_cast<double>(i) / nx, static_cast<double>(j) / ny};
  }
  bool operator==(const Grid2D&) const = default;
};

using Grid = std::variant<Grid1D, Grid2D>;

inline int grid_dim(const Grid& g) { return std::holds_alternative<Grid1D>(g) ? 1 : 2; }

inline std::size_t grid_size(const Grid& g) {
  return std::visit([](const auto& x) { return x.size(); }, g);
}

inline Point grid_point(const Grid& g, std::size_t k) {
  if (const auto* g1 = std::get_if<Grid1D>(&g)) return {g1->position(k), 0.0};
  return std::get<Grid2D>(g).position(k);
}

/// Coarsest spacing; drives the scheme-aware tolerances.
inline double grid_spacing(const Grid& g) {
  if (const auto* g1 = std::get_if<Grid1D>(&g)) return g1->h();
  const auto& g2 = std::get<Grid2D>(g);
  return std::max(g2.hx(), g2.hy());
}

/// Trapezoid weights on node grids (tensor product in 2D), midpoint weights on cell grids.
inline std::vector<double> quadrature_weights(const Grid& g) {
  if (const auto* g1 = std::get_if<Grid1D>(&g)) {
    std::vector<double> w(g1->size(), g1->h());
    if (g1->layout == Layout::Node) {
      w.front() *= 0.5;
      w.back() *= 0.5;
    }
    return w;
  }
  const auto& g2 = std::get<Grid2D>(g);
  std::vector<double> w(g2.size());
  for (int j = 0; j <= g2.ny; ++j) {
    const double wy = (j == 0 || j == g2.ny) ? 0.5 * g2.hy() : g2.hy();
    for (int i = 0; i <= g2.nx; ++i) {
      const double wx = (i == 0 || i == g2.nx) ? 0.5 * g2.hx() : g2.hx();
      w[g2.index(i, j)] = wx * wy;
    }
  }
  return w;
}

inline Grid refine(const Grid& g) {
  if (const auto* g1 = std::get_if<Grid1D>(&g)) {
    return Grid1D(2 * g1->n, g1->layout, g1->left, g1->right);
  }
  const auto& g2 = std::get<Grid2D>(g);
  return Grid2D(2 * g2.nx, 2 * g2.ny, g2.edges);
}

/// Grid function with a time stamp.
struct Field {
  Grid grid;
  std::vector<double> values;
  double t = 0.0;

  Field(Grid g, std::vector<double> v, double time = 0.0)
      : grid(std::move(g)), values(std::move(v)), t(time) {
    if (values.size() != grid_size(grid)) throw DomainError("field size does not match its grid");
    for (double x : values) {
      if (!std::isfinite(x)) throw DomainError("field values must be finite");
    }
  }

  template <class F>
  static Field sample(const Grid& g, F&& fn, double time = 0.0) {
    std::vector<double> v(grid_size(g));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid_point(g, k));
    return Field(g, std::move(v), time);
  }
};

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Discrete L^q norm over the unit domain: quadrature of |w|^q, then the q-th root.
inline double lq_norm(std::span<const double> values, std::span<const double> weights, double q) {
  if (!(q >= 2.0)) throw DomainError("L^q norm requires q >= 2");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  // Scale by the max first so that large q neither overflows nor underflows.
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) acc += weights[k] * std::pow(std::abs(values[k]) / scale, q);
  return scale * std::pow(acc, 1.0 / q);
}

inline double lq_norm(const Field& fld, double q) {
  const auto w = quadrature_weights(fld.grid);
  return lq_norm(fld.values, w, q);
}

enum class PdeClass { Parabolic, Transport, Wave };

inline std::string_view to_string(PdeClass c) {
  switch (c) {
    case PdeClass::Parabolic: return "parabolic";
    case PdeClass::Transport: return "transport";
    case PdeClass::Wave: return "wave";
  }
  return "?";
}

/// Stored solver output. Parabolic stores w, transport stores rho, wave
/// stores the characteristic pair (xi as primary, eta as secondary).
struct Trajectory {
  PdeClass pde = PdeClass::Parabolic;
  std::string scenario_id;
  Grid grid;
  std::string scheme;
  std::vector<double> times;
  std::vector<std::vector<double>> primary;
  std::vector<std::vector<double>> secondary;
  std::vector<double> dt_history;  // every accepted step, including unstored ones

  std::size_t size() const { return times.size(); }
  bool has_secondary() const { return !secondary.empty(); }

  void append(double t, std::vector<double> u, std::vector<double> v = {}) {
    if (times.empty() ? t != 0.0 : !(t > times.back())) {
      throw DomainError("trajectory stamps must start at 0 and increase strictly");
    }
    auto check = [&](const std::vector<double>& x) {
      if (x.size() != grid_size(grid)) throw DomainError("snapshot size does not match grid");
    };
    check(u);
    if (!v.empty()) check(v);
    if (!primary.empty() && v.empty() != secondary.empty()) {
      throw DomainError("secondary snapshots must be stored at every stamp or never");
    }
    times.push_back(t);
    primary.push_back(std::move(u));
    if (!v.empty()) secondary.push_back(std::move(v));
  }

  Field primary_field(std::size_t i) const { return Field(grid, primary.at(i), times.at(i)); }
  Field secondary_field(std::size_t i) const { return Field(grid, secondary.at(i), times.at(i)); }
};

/// Long-format CSV: t, y (or y0,y1), value.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj, bool secondary = false) {
  const auto& data = secondary ? traj.secondary : traj.primary;
  const int dim = grid_dim(traj.grid);
  os << (dim == 1 ? "t,y,value\n" : "t,y0,y1,value\n");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string ts = format_number(traj.times[i]);
    for (std::size_t k = 0; k < data[i].size(); ++k) {
      const Point y = grid_point(traj.grid, k);
      os << ts << ',' << format_number(y[0]);
      if (dim == 2) os << ',' << format_number(y[1]);
      os << ',' << format_number(data[i][k]) << '\n';
    }
  }
}

/// Sidecar metadata: one `key = value` line each.
inline void write_trajectory_meta(std::ostream& os, const Trajectory& traj) {
  os << "pde = " << to_string(traj.pde) << '\n';
  os << "scenario = " << traj.scenario_id << '\n';
  os << "scheme = " << traj.scheme << '\n';
  if (const auto* g1 = std::get_if<Grid1D>(&traj.grid)) {
    os << "grid_n = " << g1->n << '\n' << "layout = " << to_string(g1->layout) << '\n';
  } else {
    const auto& g2 = std::get<Grid2D>(traj.grid);
    os << "grid_nx = " << g2.nx << '\n' << "grid_ny = " << g2.ny << '\n' << "layout = node\n";
  }
  os << "steps = " << traj.dt_history.size() << '\n';
  os << "stamps = " << traj.times.size() << '\n';
  if (!traj.dt_history.empty()) {
    const auto [lo, hi] = std::minmax_element(traj.dt_history.begin(), traj.dt_history.end());
    os << "dt_min = " << format_number(*lo) << '\n' << "dt_max = " << format_number(*hi) << '\n';
  }
}

}  // namespace issglf
