#pragma once

// YAML run configurations: parsing with line-anchored errors, a canonical
// re-parseable echo, and construction of the solver scenarios.
//
// A config has the sections scenario, grid, solver, glf, certify, output and
// an optional top-level seed. See scenarios/*.yaml for one example per class.

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "issglf/certify.hpp"
#include "issglf/errors.hpp"
#include "issglf/fields.hpp"
#include "issglf/format.hpp"
#include "issglf/signals.hpp"
#include "issglf/solvers.hpp"

namespace issglf {

enum class ScenarioClass { Heat, Parabolic, Transport, Wave };

inline std::string_view to_string(ScenarioClass c) {
  switch (c) {
    case ScenarioClass::Heat: return "heat";
    case ScenarioClass::Parabolic: return "parabolic";
    case ScenarioClass::Transport: return "transport";
    case ScenarioClass::Wave: return "wave";
  }
  return "?";
}

/// Named scalar map with parameters.
///   phi, varphi: linear [k] -> k v;  cubic [a, b] -> a v + b v^3
///   h:           zero [];  linear [k] -> k v;  cubic [k] -> k v^3
///   lambda:      constant [l];  inverse_abs [a, b] -> a / (1 + b |s|);  gaussian [a, b] -> a e^{-s^2} + b
struct MapDecl {
  std::string kind;
  std::vector<double> params;
  bool operator==(const MapDecl&) const = default;
};

/// Separable field: profile(y) * signal(t).
struct FieldDecl {
  SpatialProfile profile = SpatialProfile::constant(0.0);
  std::vector<SignalPiece> signal{{0.0, PieceKind::Constant, {1.0}}};
  bool operator==(const FieldDecl&) const = default;
};

inline FieldDecl constant_field(double c) {
  FieldDecl f;
  f.profile = SpatialProfile::constant(c);
  return f;
}

struct ScenarioDecl {
  ScenarioClass cls = ScenarioClass::Parabolic;
  std::string id;
  std::string description;
  int dim = 1;
  // parabolic
  FieldDecl a = constant_field(1.0);
  FieldDecl c = constant_field(1.0);
  double a0 = 1.0;
  double c0 = 1.0;
  MapDecl phi{"linear", {1.0}};
  MapDecl varphi{"linear", {1.0}};
  MapDecl h{"zero", {}};
  FieldDecl f = constant_field(0.0);
  FieldDecl d1 = constant_field(0.0);
  FieldDecl d2 = constant_field(0.0);
  SpatialProfile w0 = SpatialProfile::constant(0.0);
  // transport
  double k = 0.5;
  MapDecl lambda{"constant", {1.0}};
  LambdaAssumption assumption = LambdaAssumption::A1;
  std::optional<double> lambda0;
  std::vector<SignalPiece> d{{0.0, PieceKind::Constant, {0.0}}};
  SpatialProfile rho0 = SpatialProfile::constant(0.0);
  // wave
  double speed = 1.0;
  SpatialProfile phi0 = SpatialProfile::constant(0.0);

  bool operator==(const ScenarioDecl&) const = default;
};

struct GridDecl {
  int n = 100;
  int nx = 32;
  int ny = 32;
  std::optional<Layout> layout;
  std::array<BoundaryKind, 4> edges{BoundaryKind::Dirichlet, BoundaryKind::Robin, BoundaryKind::Dirichlet,
                                    BoundaryKind::Robin};
  bool operator==(const GridDecl&) const = default;
};

struct GlfDecl {
  double p = 2.0;
  std::optional<double> r;
  std::optional<double> eps;
  double m = 1.0;
  bool auto_defaults = true;
  bool operator==(const GlfDecl&) const = default;
};

struct CertifyDecl {
  std::vector<double> q{2.0, kInfNorm};
  std::vector<BoundKind> bounds;  // empty selects the class defaults
  std::optional<double> tol;
  std::optional<double> R0;
  LissVariant variant = LissVariant::Q;
  double eps = 1.0;         // heat baseline split
  bool absorption = false;  // wave: audit the finite-time absorption at t = 2/c + 0.2
  bool operator==(const CertifyDecl&) const = default;
};

struct OutputDecl {
  std::string directory;
  std::vector<std::string> formats{"csv"};
  bool operator==(const OutputDecl&) const = default;
};

struct RunConfig {
  ScenarioDecl scenario;
  GridDecl grid;
  SolverConfig solver;
  GlfDecl glf;
  CertifyDecl certify;
  OutputDecl output;
  std::uint64_t seed = 0;
  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline int line_of(const YAML::Node& n) { return n.Mark().line; }

inline void require_map(const YAML::Node& n, const std::string& what) {
  if (!n.IsMap()) throw ConfigError(what + " must be a mapping", line_of(n));
}

inline void check_keys(const YAML::Node& n, const std::string& section, std::initializer_list<const char*> allowed) {
  require_map(n, section);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + section, line_of(kv.first));
  }
}

inline double parse_number(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(what + " must be a number", line_of(n));
  const std::string s = n.Scalar();
  if (s == "inf" || s == ".inf" || s == "+inf" || s == ".Inf") return kInfNorm;
  if (s == "-inf" || s == "-.inf") return -kInfNorm;
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto [end, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError(what + " must be a number, got '" + s + "'", line_of(n));
  }
  return v;
}

inline double finite_number(const YAML::Node& n, const std::string& what) {
  const double v = parse_number(n, what);
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite", line_of(n));
  return v;
}

inline int parse_int(const YAML::Node& n, const std::string& what) {
  const double v = finite_number(n, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(what + " must be an integer", line_of(n));
  return static_cast<int>(v);
}

inline bool parse_bool(const YAML::Node& n, const std::string& what) {
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    throw ConfigError(what + " must be true or false", line_of(n));
  }
}

inline std::string parse_string(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) throw ConfigError(what + " must be a string", line_of(n));
  return n.Scalar();
}

inline std::vector<double> parse_numbers(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence()) throw ConfigError(what + " must be a list of numbers", line_of(n));
  std::vector<double> out;
  for (const auto& x : n) out.push_back(finite_number(x, what));
  return out;
}

inline SpatialProfile parse_profile(const YAML::Node& n, const std::string& what) {
  if (n.IsScalar()) return SpatialProfile::constant(finite_number(n, what));
  check_keys(n, what, {"kind", "params"});
  if (!n["kind"]) throw ConfigError(what + " needs a kind", line_of(n));
  const auto kind = parse_string(n["kind"], what + ".kind");
  static const std::pair<const char*, ProfileKind> kinds[] = {
      {"constant", ProfileKind::Constant}, {"linear", ProfileKind::Linear}, {"sine", ProfileKind::Sine},
      {"bump", ProfileKind::Bump},         {"sine2d", ProfileKind::Sine2D}, {"bump2d", ProfileKind::Bump2D}};
  for (const auto& [name, pk] : kinds) {
    if (kind != name) continue;
    try {
      return SpatialProfile(pk, n["params"] ? parse_numbers(n["params"], what + ".params") : std::vector<double>{});
    } catch (const DomainError& e) {
      throw ConfigError(what + ": " + e.what(), line_of(n));
    }
  }
  throw ConfigError("unknown profile kind '" + kind + "' in " + what, line_of(n["kind"]));
}

inline SignalPiece parse_piece(const YAML::Node& n, const std::string& what, bool allow_start) {
  if (allow_start) {
    check_keys(n, what, {"start", "kind", "params"});
  } else {
    check_keys(n, what, {"kind", "params"});
  }
  if (!n["kind"]) throw ConfigError(what + " needs a kind", line_of(n));
  const auto kind = parse_string(n["kind"], what + ".kind");
  SignalPiece piece;
  if (kind == "constant") {
    piece.kind = PieceKind::Constant;
  } else if (kind == "sinusoid") {
    piece.kind = PieceKind::Sinusoid;
  } else if (kind == "exp_decay") {
    piece.kind = PieceKind::ExpDecay;
  } else if (kind == "polynomial") {
    piece.kind = PieceKind::Polynomial;
  } else {
    throw ConfigError("unknown signal kind '" + kind + "' in " + what, line_of(n["kind"]));
  }
  if (n["params"]) piece.params = parse_numbers(n["params"], what + ".params");
  if (allow_start && n["start"]) piece.start = finite_number(n["start"], what + ".start");
  return piece;
}

/// Signal: a number (constant), one {kind, params} piece, or a list of pieces with start times.
inline std::vector<SignalPiece> parse_signal(const YAML::Node& n, const std::string& what) {
  std::vector<SignalPiece> pieces;
  if (n.IsScalar()) {
    pieces.push_back({0.0, PieceKind::Constant, {finite_number(n, what)}});
  } else if (n.IsSequence()) {
    for (const auto& p : n) pieces.push_back(parse_piece(p, what, true));
  } else {
    pieces.push_back(parse_piece(n, what, false));
  }
  try {
    (void)TimeSignal(pieces);
  } catch (const DomainError& e) {
    throw ConfigError(what + ": " + e.what(), line_of(n));
  }
  return pieces;
}

inline FieldDecl parse_field(const YAML::Node& n, const std::string& what) {
  if (n.IsScalar()) return constant_field(finite_number(n, what));
  check_keys(n, what, {"profile", "signal"});
  FieldDecl f;
  f.profile = n["profile"] ? parse_profile(n["profile"], what + ".profile") : SpatialProfile::constant(1.0);
  if (n["signal"]) f.signal = parse_signal(n["signal"], what + ".signal");
  return f;
}

inline MapDecl parse_map(const YAML::Node& n, const std::string& what, std::initializer_list<std::pair<const char*, std::size_t>> kinds) {
  check_keys(n, what, {"kind", "params"});
  if (!n["kind"]) throw ConfigError(what + " needs a kind", line_of(n));
  MapDecl m{parse_string(n["kind"], what + ".kind"), {}};
  if (n["params"]) m.params = parse_numbers(n["params"], what + ".params");
  for (const auto& [name, arity] : kinds) {
    if (m.kind != name) continue;
    if (m.params.size() != arity) {
      throw ConfigError(what + " '" + m.kind + "' expects " + std::to_string(arity) + " parameters", line_of(n));
    }
    return m;
  }
  throw ConfigError("unknown kind '" + m.kind + "' in " + what, line_of(n["kind"]));
}

inline BoundaryKind parse_boundary(const YAML::Node& n, const std::string& what) {
  const auto s = parse_string(n, what);
  if (s == "dirichlet") return BoundaryKind::Dirichlet;
  if (s == "robin") return BoundaryKind::Robin;
  throw ConfigError(what + " must be dirichlet or robin", line_of(n));
}

inline BoundKind parse_bound_kind(const YAML::Node& n) {
  const auto s = parse_string(n, "certify.bounds");
  for (auto k : {BoundKind::ParabolicQ, BoundKind::TransportP, BoundKind::TransportQ, BoundKind::TransportLiss,
                 BoundKind::WaveREps, BoundKind::WaveM, BoundKind::HeatClm}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown bound kind '" + s + "'", line_of(n));
}

inline bool bound_fits(ScenarioClass cls, BoundKind k) {
  switch (cls) {
    case ScenarioClass::Heat: return k == BoundKind::HeatClm;
    case ScenarioClass::Parabolic: return k == BoundKind::ParabolicQ;
    case ScenarioClass::Transport:
      return k == BoundKind::TransportP || k == BoundKind::TransportQ || k == BoundKind::TransportLiss;
    case ScenarioClass::Wave: return k == BoundKind::WaveM || k == BoundKind::WaveREps;
  }
  return false;
}

inline void parse_scenario(const YAML::Node& n, ScenarioDecl& s) {
  require_map(n, "scenario");
  if (!n["class"]) throw ConfigError("scenario needs a class", line_of(n));
  const auto cls = parse_string(n["class"], "scenario.class");
  if (cls == "heat") {
    s.cls = ScenarioClass::Heat;
    check_keys(n, "scenario", {"class", "id", "description", "f", "d", "w0"});
  } else if (cls == "parabolic") {
    s.cls = ScenarioClass::Parabolic;
    check_keys(n, "scenario", {"class", "id", "description", "dim", "a", "c", "a0", "c0", "phi", "varphi", "h",
                               "f", "d1", "d2", "w0"});
  } else if (cls == "transport") {
    s.cls = ScenarioClass::Transport;
    check_keys(n, "scenario", {"class", "id", "description", "k", "lambda", "assumption", "lambda0", "d", "rho0"});
  } else if (cls == "wave") {
    s.cls = ScenarioClass::Wave;
    check_keys(n, "scenario", {"class", "id", "description", "c", "f", "d", "w0", "phi0"});
  } else {
    throw ConfigError("scenario.class must be heat, parabolic, transport or wave", line_of(n["class"]));
  }
  s.id = n["id"] ? parse_string(n["id"], "scenario.id") : std::string(to_string(s.cls));
  if (s.id.empty() || s.id.find_first_of("/\\ ") != std::string::npos) {
    throw ConfigError("scenario.id must be a non-empty name without slashes or spaces", line_of(n));
  }
  if (n["description"]) s.description = parse_string(n["description"], "scenario.description");

  static constexpr std::initializer_list<std::pair<const char*, std::size_t>> mono_kinds = {{"linear", 1}, {"cubic", 2}};
  switch (s.cls) {
    case ScenarioClass::Heat:
      if (n["f"]) s.f = parse_field(n["f"], "scenario.f");
      if (n["d"]) s.d = parse_signal(n["d"], "scenario.d");
      if (n["w0"]) s.w0 = parse_profile(n["w0"], "scenario.w0");
      break;
    case ScenarioClass::Parabolic:
      if (n["dim"]) {
        s.dim = parse_int(n["dim"], "scenario.dim");
        if (s.dim != 1 && s.dim != 2) throw ConfigError("scenario.dim must be 1 or 2", line_of(n["dim"]));
      }
      if (n["a"]) s.a = parse_field(n["a"], "scenario.a");
      if (n["c"]) s.c = parse_field(n["c"], "scenario.c");
      if (n["a0"]) s.a0 = finite_number(n["a0"], "scenario.a0");
      if (n["c0"]) s.c0 = finite_number(n["c0"], "scenario.c0");
      if (!(s.a0 > 0.0)) throw ConfigError("a0 must be positive", line_of(n));
      if (!(s.c0 > 0.0)) throw ConfigError("c0 must be positive", line_of(n));
      if (n["phi"]) s.phi = parse_map(n["phi"], "scenario.phi", mono_kinds);
      if (n["varphi"]) s.varphi = parse_map(n["varphi"], "scenario.varphi", mono_kinds);
      if (n["h"]) s.h = parse_map(n["h"], "scenario.h", {{"zero", 0}, {"linear", 1}, {"cubic", 1}});
      if (n["f"]) s.f = parse_field(n["f"], "scenario.f");
      if (n["d1"]) s.d1 = parse_field(n["d1"], "scenario.d1");
      if (n["d2"]) s.d2 = parse_field(n["d2"], "scenario.d2");
      if (n["w0"]) s.w0 = parse_profile(n["w0"], "scenario.w0");
      break;
    case ScenarioClass::Transport:
      if (!n["k"]) throw ConfigError("transport scenario needs k", line_of(n));
      s.k = finite_number(n["k"], "scenario.k");
      if (!(std::abs(s.k) < 1.0)) throw ConfigError("|k| must be < 1", line_of(n["k"]));
      if (n["lambda"]) {
        s.lambda = parse_map(n["lambda"], "scenario.lambda", {{"constant", 1}, {"inverse_abs", 2}, {"gaussian", 2}});
      }
      if (n["assumption"]) {
        const auto a = parse_string(n["assumption"], "scenario.assumption");
        if (a == "A1") {
          s.assumption = LambdaAssumption::A1;
        } else if (a == "A2") {
          s.assumption = LambdaAssumption::A2;
        } else {
          throw ConfigError("scenario.assumption must be A1 or A2", line_of(n["assumption"]));
        }
      }
      if (n["lambda0"]) s.lambda0 = finite_number(n["lambda0"], "scenario.lambda0");
      if (n["d"]) s.d = parse_signal(n["d"], "scenario.d");
      if (n["rho0"]) s.rho0 = parse_profile(n["rho0"], "scenario.rho0");
      break;
    case ScenarioClass::Wave:
      if (!n["c"]) throw ConfigError("wave scenario needs c", line_of(n));
      s.speed = finite_number(n["c"], "scenario.c");
      if (!(s.speed > 0.0)) throw ConfigError("wave speed c must be positive", line_of(n["c"]));
      if (n["f"]) s.f = parse_field(n["f"], "scenario.f");
      if (n["d"]) s.d = parse_signal(n["d"], "scenario.d");
      if (n["w0"]) s.w0 = parse_profile(n["w0"], "scenario.w0");
      if (n["phi0"]) s.phi0 = parse_profile(n["phi0"], "scenario.phi0");
      break;
  }
}

inline void parse_grid(const YAML::Node& n, const ScenarioDecl& s, GridDecl& g) {
  check_keys(n, "grid", {"n", "nx", "ny", "layout", "boundary"});
  const bool two_d = s.cls == ScenarioClass::Parabolic && s.dim == 2;
  if (two_d) {
    if (n["n"]) throw ConfigError("2D grids take nx and ny", line_of(n["n"]));
    if (n["nx"]) g.nx = parse_int(n["nx"], "grid.nx");
    if (n["ny"]) g.ny = parse_int(n["ny"], "grid.ny");
    if (g.nx < 8 || g.ny < 8) throw ConfigError("2D grid needs at least 8 cells per direction", line_of(n));
  } else {
    if (n["nx"] || n["ny"]) throw ConfigError("1D grids take n", line_of(n));
    if (n["n"]) g.n = parse_int(n["n"], "grid.n");
    if (g.n < 8) throw ConfigError("1D grid needs at least 8 cells", line_of(n));
  }
  if (n["layout"]) {
    const auto l = parse_string(n["layout"], "grid.layout");
    if (l == "node") {
      g.layout = Layout::Node;
    } else if (l == "cell") {
      g.layout = Layout::Cell;
    } else {
      throw ConfigError("grid.layout must be node or cell", line_of(n["layout"]));
    }
    const Layout want = s.cls == ScenarioClass::Transport ? Layout::Cell : Layout::Node;
    if (*g.layout != want) {
      throw ConfigError(std::string(to_string(s.cls)) + " runs need a " + std::string(to_string(want)) + " grid",
                        line_of(n["layout"]));
    }
  }
  if (n["boundary"]) {
    const auto& b = n["boundary"];
    if (s.cls != ScenarioClass::Parabolic) {
      throw ConfigError("boundary labels apply to parabolic scenarios only", line_of(b));
    }
    if (two_d) {
      check_keys(b, "grid.boundary", {"left", "right", "bottom", "top"});
    } else {
      check_keys(b, "grid.boundary", {"left", "right"});
    }
    const char* names[] = {"left", "right", "bottom", "top"};
    for (int e = 0; e < (two_d ? 4 : 2); ++e) {
      if (b[names[e]]) g.edges[e] = parse_boundary(b[names[e]], std::string("grid.boundary.") + names[e]);
    }
  }
}

inline void parse_solver(const YAML::Node& n, SolverConfig& c) {
  check_keys(n, "solver", {"dt", "cfl_sigma", "t_end", "bc_tol", "output_stride"});
  if (n["dt"]) c.dt = finite_number(n["dt"], "solver.dt");
  if (n["cfl_sigma"]) c.cfl_sigma = finite_number(n["cfl_sigma"], "solver.cfl_sigma");
  if (n["t_end"]) c.t_end = finite_number(n["t_end"], "solver.t_end");
  if (n["bc_tol"]) c.bc_tol = finite_number(n["bc_tol"], "solver.bc_tol");
  if (n["output_stride"]) c.output_stride = parse_int(n["output_stride"], "solver.output_stride");
  try {
    validate(c);
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), line_of(n));
  }
}

inline void parse_glf(const YAML::Node& n, GlfDecl& g) {
  check_keys(n, "glf", {"p", "r", "eps", "m", "auto"});
  if (n["p"]) g.p = finite_number(n["p"], "glf.p");
  if (!(g.p > 1.0)) throw ConfigError("glf.p must exceed 1", line_of(n));
  if (n["r"]) g.r = finite_number(n["r"], "glf.r");
  if (n["eps"]) g.eps = finite_number(n["eps"], "glf.eps");
  if (n["m"]) g.m = finite_number(n["m"], "glf.m");
  if (n["auto"]) g.auto_defaults = parse_bool(n["auto"], "glf.auto");
  if (!(g.m > 0.0)) throw ConfigError("glf.m must be positive", line_of(n));
}

inline void parse_certify(const YAML::Node& n, ScenarioClass cls, CertifyDecl& c) {
  check_keys(n, "certify", {"q", "bounds", "tol", "R0", "variant", "eps", "absorption"});
  if (n["q"]) {
    if (!n["q"].IsSequence()) throw ConfigError("certify.q must be a list", line_of(n["q"]));
    c.q.clear();
    for (const auto& x : n["q"]) {
      const double q = parse_number(x, "certify.q");
      if (!(q >= 2.0)) throw ConfigError("norm exponent q must lie in [2, inf]", line_of(x));
      c.q.push_back(q);
    }
  }
  if (n["bounds"]) {
    if (!n["bounds"].IsSequence()) throw ConfigError("certify.bounds must be a list", line_of(n["bounds"]));
    for (const auto& x : n["bounds"]) {
      const auto k = parse_bound_kind(x);
      if (!bound_fits(cls, k)) {
        throw ConfigError("bound " + std::string(to_string(k)) + " does not apply to a " +
                              std::string(to_string(cls)) + " scenario",
                          line_of(x));
      }
      c.bounds.push_back(k);
    }
  }
  if (n["tol"]) {
    c.tol = finite_number(n["tol"], "certify.tol");
    if (!(*c.tol >= 0.0)) throw ConfigError("certify.tol must be nonnegative", line_of(n["tol"]));
  }
  if (n["R0"]) {
    c.R0 = finite_number(n["R0"], "certify.R0");
    if (!(*c.R0 > 0.0)) throw ConfigError("certify.R0 must be positive", line_of(n["R0"]));
  }
  if (n["variant"]) {
    const auto v = parse_string(n["variant"], "certify.variant");
    if (v == "p") {
      c.variant = LissVariant::P;
    } else if (v == "q") {
      c.variant = LissVariant::Q;
    } else {
      throw ConfigError("certify.variant must be p or q", line_of(n["variant"]));
    }
  }
  if (n["eps"]) c.eps = finite_number(n["eps"], "certify.eps");
  if (n["absorption"]) c.absorption = parse_bool(n["absorption"], "certify.absorption");
}

inline void parse_output(const YAML::Node& n, OutputDecl& o) {
  check_keys(n, "output", {"directory", "formats"});
  if (n["directory"]) o.directory = parse_string(n["directory"], "output.directory");
  if (n["formats"]) {
    if (!n["formats"].IsSequence()) throw ConfigError("output.formats must be a list", line_of(n["formats"]));
    o.formats.clear();
    for (const auto& x : n["formats"]) {
      const auto f = parse_string(x, "output.formats");
      if (f != "csv") throw ConfigError("unsupported output format '" + f + "' (csv only)", line_of(x));
      o.formats.push_back(f);
    }
  }
}

}  // namespace detail

/// Parses a config document. Errors carry the line of the offending node.
inline RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line);
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of sections", root ? root.Mark().line : -1);
  detail::check_keys(root, "config", {"scenario", "grid", "solver", "glf", "certify", "output", "seed"});
  if (!root["scenario"]) throw ConfigError("config needs a scenario section", -1);
  RunConfig cfg;
  detail::parse_scenario(root["scenario"], cfg.scenario);
  if (root["grid"]) detail::parse_grid(root["grid"], cfg.scenario, cfg.grid);
  if (root["solver"]) detail::parse_solver(root["solver"], cfg.solver);
  if (root["glf"]) detail::parse_glf(root["glf"], cfg.glf);
  if (root["certify"]) detail::parse_certify(root["certify"], cfg.scenario.cls, cfg.certify);
  if (root["output"]) detail::parse_output(root["output"], cfg.output);
  if (root["seed"]) {
    const double s = detail::finite_number(root["seed"], "seed");
    if (s < 0.0 || s != std::floor(s)) throw ConfigError("seed must be a nonnegative integer", detail::line_of(root["seed"]));
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (cfg.scenario.cls == ScenarioClass::Parabolic && cfg.solver.dt <= 0.0) {
    throw ConfigError("parabolic runs need solver.dt > 0", root["solver"] ? detail::line_of(root["solver"]) : -1);
  }
  if (cfg.scenario.cls == ScenarioClass::Heat && cfg.solver.dt <= 0.0) {
    throw ConfigError("heat runs need solver.dt > 0", root["solver"] ? detail::line_of(root["solver"]) : -1);
  }
  return cfg;
}

// Echo: canonical YAML that parse_config maps back to an equal RunConfig.

namespace detail {

inline void emit_number(YAML::Emitter& out, double v) {
  if (std::isinf(v)) {
    out << (v > 0 ? "inf" : "-inf");
  } else {
    out << format_number(v);
  }
}

inline void emit_numbers(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : v) emit_number(out, x);
  out << YAML::EndSeq;
}

inline void emit_profile(YAML::Emitter& out, const SpatialProfile& p) {
  if (p.is_constant()) {
    emit_number(out, p.params()[0]);
    return;
  }
  out << YAML::Flow << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << std::string(to_string(p.kind()))
      << YAML::Key << "params" << YAML::Value;
  emit_numbers(out, p.params());
  out << YAML::EndMap;
}

inline void emit_piece(YAML::Emitter& out, const SignalPiece& piece, bool with_start) {
  out << YAML::Flow << YAML::BeginMap;
  if (with_start) {
    out << YAML::Key << "start" << YAML::Value;
    emit_number(out, piece.start);
  }
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(piece.kind)) << YAML::Key << "params"
      << YAML::Value;
  emit_numbers(out, piece.params);
  out << YAML::EndMap;
}

inline void emit_signal(YAML::Emitter& out, const std::vector<SignalPiece>& pieces) {
  if (pieces.size() == 1) {
    if (pieces[0].kind == PieceKind::Constant) {
      emit_number(out, pieces[0].params[0]);
    } else {
      emit_piece(out, pieces[0], false);
    }
    return;
  }
  out << YAML::BeginSeq;
  for (const auto& p : pieces) emit_piece(out, p, true);
  out << YAML::EndSeq;
}

inline void emit_field(YAML::Emitter& out, const FieldDecl& f) {
  const bool unit_signal = f.signal.size() == 1 && f.signal[0].kind == PieceKind::Constant && f.signal[0].params[0] == 1.0;
  if (unit_signal && f.profile.is_constant()) {
    emit_number(out, f.profile.params()[0]);
    return;
  }
  out << YAML::BeginMap << YAML::Key << "profile" << YAML::Value;
  emit_profile(out, f.profile);
  out << YAML::Key << "signal" << YAML::Value;
  emit_signal(out, f.signal);
  out << YAML::EndMap;
}

inline void emit_map(YAML::Emitter& out, const MapDecl& m) {
  out << YAML::Flow << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << m.kind << YAML::Key << "params"
      << YAML::Value;
  emit_numbers(out, m.params);
  out << YAML::EndMap;
}

template <class F>
void emit_key(YAML::Emitter& out, const char* key, F&& body) {
  out << YAML::Key << key << YAML::Value;
  body();
}

}  // namespace detail

inline std::string echo_config(const RunConfig& cfg) {
  using namespace detail;
  YAML::Emitter out;
  const auto& s = cfg.scenario;
  auto num = [&](const char* key, double v) { emit_key(out, key, [&] { emit_number(out, v); }); };
  out << YAML::BeginMap;

  out << YAML::Key << "scenario" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "class" << YAML::Value << std::string(to_string(s.cls));
  out << YAML::Key << "id" << YAML::Value << s.id;
  if (!s.description.empty()) out << YAML::Key << "description" << YAML::Value << YAML::DoubleQuoted << s.description;
  switch (s.cls) {
    case ScenarioClass::Heat:
      emit_key(out, "f", [&] { emit_field(out, s.f); });
      emit_key(out, "d", [&] { emit_signal(out, s.d); });
      emit_key(out, "w0", [&] { emit_profile(out, s.w0); });
      break;
    case ScenarioClass::Parabolic:
      num("dim", s.dim);
      emit_key(out, "a", [&] { emit_field(out, s.a); });
      emit_key(out, "c", [&] { emit_field(out, s.c); });
      num("a0", s.a0);
      num("c0", s.c0);
      emit_key(out, "phi", [&] { emit_map(out, s.phi); });
      emit_key(out, "varphi", [&] { emit_map(out, s.varphi); });
      emit_key(out, "h", [&] { emit_map(out, s.h); });
      emit_key(out, "f", [&] { emit_field(out, s.f); });
      emit_key(out, "d1", [&] { emit_field(out, s.d1); });
      emit_key(out, "d2", [&] { emit_field(out, s.d2); });
      emit_key(out, "w0", [&] { emit_profile(out, s.w0); });
      break;
    case ScenarioClass::Transport:
      num("k", s.k);
      emit_key(out, "lambda", [&] { emit_map(out, s.lambda); });
      out << YAML::Key << "assumption" << YAML::Value << std::string(to_string(s.assumption));
      if (s.lambda0) num("lambda0", *s.lambda0);
      emit_key(out, "d", [&] { emit_signal(out, s.d); });
      emit_key(out, "rho0", [&] { emit_profile(out, s.rho0); });
      break;
    case ScenarioClass::Wave:
      num("c", s.speed);
      emit_key(out, "f", [&] { emit_field(out, s.f); });
      emit_key(out, "d", [&] { emit_signal(out, s.d); });
      emit_key(out, "w0", [&] { emit_profile(out, s.w0); });
      emit_key(out, "phi0", [&] { emit_profile(out, s.phi0); });
      break;
  }
  out << YAML::EndMap;

  const auto& g = cfg.grid;
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  const bool two_d = s.cls == ScenarioClass::Parabolic && s.dim == 2;
  if (two_d) {
    num("nx", g.nx);
    num("ny", g.ny);
  } else {
    num("n", g.n);
  }
  if (g.layout) out << YAML::Key << "layout" << YAML::Value << std::string(to_string(*g.layout));
  if (s.cls == ScenarioClass::Parabolic) {
    out << YAML::Key << "boundary" << YAML::Value << YAML::Flow << YAML::BeginMap;
    const char* names[] = {"left", "right", "bottom", "top"};
    for (int e = 0; e < (two_d ? 4 : 2); ++e) {
      out << YAML::Key << names[e] << YAML::Value << std::string(to_string(g.edges[e]));
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  const auto& c = cfg.solver;
  out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
  num("dt", c.dt);
  num("cfl_sigma", c.cfl_sigma);
  num("t_end", c.t_end);
  num("bc_tol", c.bc_tol);
  num("output_stride", c.output_stride);
  out << YAML::EndMap;

  out << YAML::Key << "glf" << YAML::Value << YAML::BeginMap;
  num("p", cfg.glf.p);
  if (cfg.glf.r) num("r", *cfg.glf.r);
  if (cfg.glf.eps) num("eps", *cfg.glf.eps);
  num("m", cfg.glf.m);
  out << YAML::Key << "auto" << YAML::Value << cfg.glf.auto_defaults;
  out << YAML::EndMap;

  const auto& ct = cfg.certify;
  out << YAML::Key << "certify" << YAML::Value << YAML::BeginMap;
  emit_key(out, "q", [&] { emit_numbers(out, ct.q); });
  if (!ct.bounds.empty()) {
    out << YAML::Key << "bounds" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto k : ct.bounds) out << std::string(to_string(k));
    out << YAML::EndSeq;
  }
  if (ct.tol) num("tol", *ct.tol);
  if (ct.R0) num("R0", *ct.R0);
  out << YAML::Key << "variant" << YAML::Value << (ct.variant == LissVariant::P ? "p" : "q");
  num("eps", ct.eps);
  out << YAML::Key << "absorption" << YAML::Value << ct.absorption;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  if (!cfg.output.directory.empty()) out << YAML::Key << "directory" << YAML::Value << cfg.output.directory;
  out << YAML::Key << "formats" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& f : cfg.output.formats) out << f;
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "seed" << YAML::Value << std::to_string(cfg.seed);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

// Scenario construction.

inline InitialData make_initial(const SpatialProfile& p) {
  return [p](const Point& y) { return p(y); };
}

inline SpaceTimeField make_field(const FieldDecl& f) {
  return SpaceTimeField::separable(f.profile, TimeSignal(f.signal));
}

inline MonotoneFn make_monotone(const MapDecl& m, const std::string& label) {
  const double a = m.params.at(0);
  if (m.kind == "linear") {
    if (!(a > 0.0)) throw DomainError(label + " linear slope must be positive");
    return MonotoneFn([a](double v) { return a * v; }, -1e3, 1e3, label, true);
  }
  const double b = m.params.at(1);
  if (!(a > 0.0) || b < 0.0) throw DomainError(label + " cubic needs a > 0 and b >= 0");
  return MonotoneFn([a, b](double v) { return a * v + b * v * v * v; }, -1e3, 1e3, label, true);
}

inline HTerm make_h(const MapDecl& m) {
  if (m.kind == "zero") return {};
  const double k = m.params.at(0);
  if (k < 0.0) throw DomainError("h coefficient must be nonnegative");
  if (m.kind == "linear") return [k](const Point&, double, double v) { return k * v; };
  return [k](const Point&, double, double v) { return k * v * v * v; };
}

inline std::function<double(double)> make_lambda(const MapDecl& m) {
  const auto& q = m.params;
  if (m.kind == "constant") {
    const double l = q[0];
    return [l](double) { return l; };
  }
  if (m.kind == "inverse_abs") {
    const double a = q[0], b = q[1];
    return [a, b](double s) { return a / (1.0 + b * std::abs(s)); };
  }
  const double a = q[0], b = q[1];
  return [a, b](double s) { return a * std::exp(-s * s) + b; };
}

/// Infimum of lambda over the reals when it is positive (used as lambda0 under A1).
inline std::optional<double> lambda_infimum(const MapDecl& m) {
  if (m.kind == "constant") return m.params[0];
  if (m.kind == "gaussian") return std::min(m.params[1], m.params[0] + m.params[1]);
  return std::nullopt;
}

inline Grid make_grid(const RunConfig& cfg) {
  const auto& s = cfg.scenario;
  const auto& g = cfg.grid;
  if (s.cls == ScenarioClass::Parabolic && s.dim == 2) return Grid2D(g.nx, g.ny, g.edges);
  if (s.cls == ScenarioClass::Transport) return Grid1D(g.n, Layout::Cell);
  if (s.cls == ScenarioClass::Parabolic) return Grid1D(g.n, Layout::Node, g.edges[kLeft], g.edges[kRight]);
  return Grid1D(g.n, Layout::Node);
}

inline ParabolicScenario make_parabolic(const ScenarioDecl& s) {
  if (s.cls == ScenarioClass::Heat) {
    auto scn = make_heat_scenario(make_field(s.f), TimeSignal(s.d), make_initial(s.w0));
    scn.id = s.id;
    return scn;
  }
  ParabolicScenario scn;
  scn.id = s.id;
  scn.dim = s.dim;
  scn.a = make_field(s.a);
  scn.c = make_field(s.c);
  scn.a0 = s.a0;
  scn.c0 = s.c0;
  scn.phi = make_monotone(s.phi, "phi");
  scn.varphi = make_monotone(s.varphi, "varphi");
  scn.h_term = make_h(s.h);
  scn.f = make_field(s.f);
  scn.d1 = make_field(s.d1);
  scn.d2 = make_field(s.d2);
  scn.w0 = make_initial(s.w0);
  return scn;
}

inline TransportScenario make_transport(const ScenarioDecl& s) {
  TransportScenario scn;
  scn.id = s.id;
  scn.lambda = make_lambda(s.lambda);
  scn.assumption = s.assumption;
  scn.k = s.k;
  scn.d = TimeSignal(s.d);
  scn.rho0 = make_initial(s.rho0);
  if (s.assumption == LambdaAssumption::A1) {
    const auto inf = s.lambda0 ? s.lambda0 : lambda_infimum(s.lambda);
    if (!inf) throw DomainError("A1 needs lambda0 for this velocity map");
    scn.lambda0 = *inf;
  }
  return scn;
}

inline WaveScenario make_wave(const ScenarioDecl& s) {
  WaveScenario scn;
  scn.id = s.id;
  scn.c = s.speed;
  scn.f = make_field(s.f);
  scn.d = TimeSignal(s.d);
  scn.w0 = make_initial(s.w0);
  scn.phi0 = make_initial(s.phi0);
  return scn;
}

}  // namespace issglf
