#pragma once

// Disturbance and initial-data signals: piecewise right-continuous time
// signals, spatial profiles on the unit interval/square, and space-time
// fields, together with the sup-norm queries the ISS gains are built from.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "issglf/errors.hpp"

namespace issglf {

inline constexpr int kDefaultSupResolution = 4096;

enum class PieceKind { Constant, Sinusoid, ExpDecay, Polynomial };

inline std::string_view to_string(PieceKind kind) {
  switch (kind) {
    case PieceKind::Constant: return "constant";
    case PieceKind::Sinusoid: return "sinusoid";
    case PieceKind::ExpDecay: return "exp_decay";
    case PieceKind::Polynomial: return "polynomial";
  }
  return "?";
}

/// One analytic piece, active on [start, next piece's start).
///
/// All kinds are evaluated in global time t:
///   constant    [c]                          c
///   sinusoid    [A, freq, phase=0, offset=0] A sin(2 pi freq t + phase) + offset
///   exp_decay   [A, rate, offset=0]          A exp(-rate t) + offset
///   polynomial  [c0, c1, ...]                sum_k c_k t^k
struct SignalPiece {
  double start = 0.0;
  PieceKind kind = PieceKind::Constant;
  std::vector<double> params;

  bool operator==(const SignalPiece&) const = default;
};

namespace detail {

inline double param_or(const std::vector<double>& v, std::size_t i, double fallback) {
  return i < v.size() ? v[i] : fallback;
}

inline void validate_piece(const SignalPiece& piece) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (piece.params.size() < lo || piece.params.size() > hi) {
      throw DomainError(std::string("signal piece '") + std::string(to_string(piece.kind)) +
                        "' has " + std::to_string(piece.params.size()) + " parameters");
    }
  };
  switch (piece.kind) {
    case PieceKind::Constant: need(1, 1); break;
    case PieceKind::Sinusoid: need(2, 4); break;
    case PieceKind::ExpDecay: need(2, 3); break;
    case PieceKind::Polynomial: need(1, 32); break;
  }
  for (double v : piece.params) {
    if (!std::isfinite(v)) throw DomainError("signal parameters must be finite");
  }
}

inline double eval_piece(const SignalPiece& piece, double t) {
  const auto& q = piece.params;
  switch (piece.kind) {
    case PieceKind::Constant: return q[0];
    case PieceKind::Sinusoid:
      return q[0] * std::sin(2.0 * std::numbers::pi * q[1] * t + param_or(q, 2, 0.0)) +
             param_or(q, 3, 0.0);
    case PieceKind::ExpDecay: return q[0] * std::exp(-q[1] * t) + param_or(q, 2, 0.0);
    case PieceKind::Polynomial: {
      double acc = 0.0;
      for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
  }
  return 0.0;
}

inline double poly_derivative(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * c[k];
  return acc;
}

/// sup |piece| over the closed interval [a, b].
inline double piece_sup(const SignalPiece& piece, double a, double b, int resolution) {
  const auto& q = piece.params;
  double best = std::max(std::abs(eval_piece(piece, a)), std::abs(eval_piece(piece, b)));
  switch (piece.kind) {
    case PieceKind::Constant:
    case PieceKind::ExpDecay:
      return best;
    case PieceKind::Sinusoid: {
      const double amp = q[0];
      const double omega = 2.0 * std::numbers::pi * q[1];
      const double offset = param_or(q, 3, 0.0);
      if (omega == 0.0 || amp == 0.0) return best;
      double th0 = omega * a + param_or(q, 2, 0.0);
      double th1 = omega * b + param_or(q, 2, 0.0);
      if (th0 > th1) std::swap(th0, th1);
      const double two_pi = 2.0 * std::numbers::pi;
      auto contains = [&](double base) {
        const double k = std::ceil((th0 - base) / two_pi);
        return base + k * two_pi <= th1;
      };
      if (contains(0.5 * std::numbers::pi)) best = std::max(best, std::abs(offset + amp));
      if (contains(1.5 * std::numbers::pi)) best = std::max(best, std::abs(offset - amp));
      return best;
    }
    case PieceKind::Polynomial: {
      // Dense lattice plus refinement of every derivative sign change.
      const int n = std::max(resolution, 2);
      double prev_t = a;
      double prev_d = poly_derivative(q, a);
      for (int i = 1; i < n; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / (n - 1);
        best = std::max(best, std::abs(eval_piece(piece, t)));
        const double d = poly_derivative(q, t);
        if ((prev_d < 0.0) != (d < 0.0)) {
          double lo = prev_t;
          double hi = t;
          const bool lo_negative = prev_d < 0.0;
          for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((poly_derivative(q, mid) < 0.0) == lo_negative) {
              lo = mid;
            } else {
              hi = mid;
            }
          }
          best = std::max(best, std::abs(eval_piece(piece, 0.5 * (lo + hi))));
        }
        prev_t = t;
        prev_d = d;
      }
      return best;
    }
  }
  return best;
}

}  // namespace detail

/// Piecewise analytic signal on [0, inf), right-continuous at breakpoints.
class TimeSignal {
 public:
  TimeSignal() : TimeSignal(constant(0.0)) {}

  explicit TimeSignal(std::vector<SignalPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw DomainError("time signal needs at least one piece");
    if (pieces_.front().start != 0.0) throw DomainError("first signal piece must start at 0");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      detail::validate_piece(pieces_[i]);
      if (i > 0 && !(pieces_[i].start > pieces_[i - 1].start)) {
        throw DomainError("signal breakpoints must be strictly increasing");
      }
    }
  }

  static TimeSignal constant(double c) { return TimeSignal({{0.0, PieceKind::Constant, {c}}}); }
  static TimeSignal sinusoid(double amp, double freq, double phase = 0.0, double offset = 0.0) {
    return TimeSignal({{0.0, PieceKind::Sinusoid, {amp, freq, phase, offset}}});
  }
  static TimeSignal exp_decay(double amp, double rate, double offset = 0.0) {
    return TimeSignal({{0.0, PieceKind::ExpDecay, {amp, rate, offset}}});
  }
  static TimeSignal polynomial(std::vector<double> coeffs) {
    return TimeSignal({{0.0, PieceKind::Polynomial, std::move(coeffs)}});
  }

  double operator()(double t) const {
    if (t < 0.0 || std::isnan(t)) throw DomainError("signals are defined for t >= 0 only");
    return detail::eval_piece(active_piece(t), t);
  }

  /// Constant signals are time invariant; used by solvers to reuse factorizations.
  bool is_constant() const {
    return pieces_.size() == 1 && pieces_[0].kind == PieceKind::Constant;
  }

  const std::vector<SignalPiece>& pieces() const noexcept { return pieces_; }

  TimeSignal scaled(double c) const {
    std::vector<SignalPiece> out = pieces_;
    for (auto& piece : out) {
      switch (piece.kind) {
        case PieceKind::Constant:
        case PieceKind::Polynomial:
          for (double& v : piece.params) v *= c;
          break;
        case PieceKind::Sinusoid:
          piece.params.resize(4, 0.0);
          piece.params[0] *= c;
          piece.params[3] *= c;
          break;
        case PieceKind::ExpDecay:
          piece.params.resize(3, 0.0);
          piece.params[0] *= c;
          piece.params[2] *= c;
          break;
      }
    }
    return TimeSignal(std::move(out));
  }

 private:
  const SignalPiece& active_piece(double t) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double v, const SignalPiece& p) { return v < p.start; });
    return *std::prev(it);
  }

  std::vector<SignalPiece> pieces_;
};

inline double eval_signal(const TimeSignal& sig, double t) { return sig(t); }

/// sup |sig| over the closed window [t0, t1]; analytic per piece except for
/// polynomials, which are sampled at `resolution` points and refined at
/// derivative sign changes.
inline double sup_window(const TimeSignal& sig, double t0, double t1,
                         int resolution = kDefaultSupResolution) {
  if (t0 < 0.0 || !(t1 > t0)) throw DomainError("sup window must satisfy 0 <= t0 < t1");
  if (resolution < 2) throw DomainError("sup resolution must be at least 2");
  const auto& pieces = sig.pieces();
  double best = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double start = pieces[i].start;
    const double end = i + 1 < pieces.size() ? pieces[i + 1].start : t1;
    const double a = std::max(start, t0);
    const double b = std::min(end, t1);
    if (a > b) continue;
    best = std::max(best, detail::piece_sup(pieces[i], a, b, resolution));
  }
  return best;
}

/// Running supremum over (0, t); at t = 0 the window degenerates to the value at 0.
inline double running_sup(const TimeSignal& sig, double t) {
  return t > 0.0 ? sup_window(sig, 0.0, t) : std::abs(sig(0.0));
}

using Point = std::array<double, 2>;

enum class ProfileKind { Constant, Linear, Sine, Bump, Sine2D, Bump2D };

inline std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Constant: return "constant";
    case ProfileKind::Linear: return "linear";
    case ProfileKind::Sine: return "sine";
    case ProfileKind::Bump: return "bump";
    case ProfileKind::Sine2D: return "sine2d";
    case ProfileKind::Bump2D: return "bump2d";
  }
  return "?";
}

/// Analytic spatial profile on the unit interval (first coordinate) or square.
///
///   constant [c]                  c
///   linear   [a, b]               a + b y
///   sine     [A, m]               A sin(m pi y)
///   bump     [A, center, width]   A cos^2(pi (y - center) / width) on |y - center| < width/2
///   sine2d   [A, m, n]            A sin(m pi y0) sin(n pi y1)
///   bump2d   [A, c0, c1, width]   radial cos^2 bump of diameter `width`
class SpatialProfile {
 public:
  SpatialProfile() : SpatialProfile(ProfileKind::Constant, {0.0}) {}

  SpatialProfile(ProfileKind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {
    std::size_t want = 0;
    switch (kind_) {
      case ProfileKind::Constant: want = 1; break;
      case ProfileKind::Linear: want = 2; break;
      case ProfileKind::Sine: want = 2; break;
      case ProfileKind::Bump: want = 3; break;
      case ProfileKind::Sine2D: want = 3; break;
      case ProfileKind::Bump2D: want = 4; break;
    }
    if (params_.size() != want) {
      throw DomainError(std::string("profile '") + std::string(to_string(kind_)) + "' expects " +
                        std::to_string(want) + " parameters");
    }
    for (double v : params_) {
      if (!std::isfinite(v)) throw DomainError("profile parameters must be finite");
    }
    if ((kind_ == ProfileKind::Bump || kind_ == ProfileKind::Bump2D) && !(params_.back() > 0.0)) {
      throw DomainError("bump width must be positive");
    }
  }

  static SpatialProfile constant(double c) { return {ProfileKind::Constant, {c}}; }

  double operator()(const Point& y) const {
    const auto& q = params_;
    constexpr double pi = std::numbers::pi;
    switch (kind_) {
      case ProfileKind::Constant: return q[0];
      case ProfileKind::Linear: return q[0] + q[1] * y[0];
      case ProfileKind::Sine: return q[0] * std::sin(q[1] * pi * y[0]);
      case ProfileKind::Bump: {
        const double u = (y[0] - q[1]) / q[2];
        if (std::abs(u) >= 0.5) return 0.0;
        const double c = std::cos(pi * u);
        return q[0] * c * c;
      }
      case ProfileKind::Sine2D: return q[0] * std::sin(q[1] * pi * y[0]) * std::sin(q[2] * pi * y[1]);
      case ProfileKind::Bump2D: {
        const double u = std::hypot(y[0] - q[1], y[1] - q[2]) / q[3];
        if (u >= 0.5) return 0.0;
        const double c = std::cos(pi * u);
        return q[0] * c * c;
      }
    }
    return 0.0;
  }

  /// sup |profile| over the closed unit interval/square (upper bound for
  /// sine modes with non-integer wave numbers is still |A|).
  double sup_abs() const {
    const auto& q = params_;
    switch (kind_) {
      case ProfileKind::Constant: return std::abs(q[0]);
      case ProfileKind::Linear: return std::max(std::abs(q[0]), std::abs(q[0] + q[1]));
      default: return std::abs(q[0]);
    }
  }

  ProfileKind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }
  bool is_constant() const noexcept { return kind_ == ProfileKind::Constant; }
  bool operator==(const SpatialProfile& o) const { return kind_ == o.kind_ && params_ == o.params_; }

 private:
  ProfileKind kind_;
  std::vector<double> params_;
};

/// Product of a spatial profile and a time signal.
struct SeparableForm {
  SpatialProfile profile;
  TimeSignal signal;
};

/// f(y, t) on the scenario domain times [0, inf).
class SpaceTimeField {
 public:
  using Eval = std::function<double(const Point&, double)>;
  /// Certified sup of |f| over the whole domain times [t0, t1].
  using SupHint = std::function<double(double, double)>;

  SpaceTimeField() : SpaceTimeField(constant(0.0)) {}

  SpaceTimeField(Eval eval, SupHint sup_hint = {}, bool time_invariant = false)
      : eval_(std::move(eval)), sup_hint_(std::move(sup_hint)), time_invariant_(time_invariant) {
    if (!eval_) throw DomainError("space-time field needs an evaluator");
  }

  static SpaceTimeField constant(double c) { return separable(SpatialProfile::constant(c), TimeSignal::constant(1.0)); }

  static SpaceTimeField separable(SpatialProfile profile, TimeSignal signal) {
    SpaceTimeField out(
        [profile, signal](const Point& y, double t) { return profile(y) * signal(t); },
        [profile, signal](double t0, double t1) {
          const double time_sup = t1 > t0 ? sup_window(signal, t0, t1) : std::abs(signal(t0));
          return profile.sup_abs() * time_sup;
        },
        signal.is_constant());
    out.separable_ = SeparableForm{std::move(profile), std::move(signal)};
    return out;
  }

  /// Spatially constant field driven by a time signal.
  static SpaceTimeField from_signal(TimeSignal signal) {
    return separable(SpatialProfile::constant(1.0), std::move(signal));
  }

  double operator()(const Point& y, double t) const { return eval_(y, t); }

  const SupHint& sup_hint() const noexcept { return sup_hint_; }
  const std::optional<SeparableForm>& separable_form() const noexcept { return separable_; }
  bool time_invariant() const noexcept { return time_invariant_; }

 private:
  Eval eval_;
  SupHint sup_hint_;
  bool time_invariant_;
  std::optional<SeparableForm> separable_;
};

/// Lattice used when a field sup has to be sampled.
struct SampleSpec {
  int dim = 1;
  int n_space = 64;  // intervals per spatial direction
  int n_time = 256;  // intervals in time
};

namespace detail {

inline double sampled_sup(const SpaceTimeField& fld, std::span<const Point> points, double t0,
                          double t1, int n_time) {
  double best = 0.0;
  const int nt = t1 > t0 ? std::max(n_time, 1) : 0;
  for (int k = 0; k <= nt; ++k) {
    const double t = nt == 0 ? t0 : t0 + (t1 - t0) * static_cast<double>(k) / nt;
    for (const auto& y : points) best = std::max(best, std::abs(fld(y, t)));
  }
  return best;
}

inline std::vector<Point> lattice_points(int dim, int n) {
  std::vector<Point> pts;
  if (dim == 1) {
    for (int i = 0; i <= n; ++i) pts.push_back({static_cast<double>(i) / n, 0.0});
  } else {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        pts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      }
    }
  }
  return pts;
}

}  // namespace detail

/// sup |fld| over the closed space-time window; the sup hint wins when it
/// dominates the sampled value (a hint below a sample is not trusted).
inline double sup_field(const SpaceTimeField& fld, const SampleSpec& spec, double t0, double t1) {
  if (t0 < 0.0 || t1 < t0) throw DomainError("field sup window must satisfy 0 <= t0 <= t1");
  if (spec.dim < 1 || spec.dim > 2 || spec.n_space < 1) throw DomainError("bad sample spec");
  // Separable hints are exact, so the lattice pass is skipped.
  if (fld.separable_form()) return fld.sup_hint()(t0, t1);
  const auto pts = detail::lattice_points(spec.dim, spec.n_space);
  const double sampled = detail::sampled_sup(fld, pts, t0, t1, spec.n_time);
  if (fld.sup_hint()) {
    const double hint = fld.sup_hint()(t0, t1);
    if (hint >= sampled) return hint;
  }
  return sampled;
}

/// sup |fld| over a finite point set (a boundary portion) times [t0, t1].
inline double sup_field_on(const SpaceTimeField& fld, std::span<const Point> points, double t0,
                           double t1, int n_time = kDefaultSupResolution) {
  if (t0 < 0.0 || t1 < t0) throw DomainError("field sup window must satisfy 0 <= t0 <= t1");
  if (points.empty()) return 0.0;
  if (const auto& sep = fld.separable_form()) {
    double space = 0.0;
    for (const auto& y : points) space = std::max(space, std::abs(sep->profile(y)));
    const double time = t1 > t0 ? sup_window(sep->signal, t0, t1) : std::abs(sep->signal(t0));
    return space * time;
  }
  return detail::sampled_sup(fld, points, t0, t1, n_time);
}

}  // namespace issglf
