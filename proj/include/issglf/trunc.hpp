#pragma once

// Stampacchia truncation pair (g, G), its algebraic properties as
// checkable gaps, and the two scalar lemmas every decay estimate rests on
// (Young's inequality with epsilon, Gronwall's integral envelope).

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "issglf/errors.hpp"

namespace issglf {

/// g(s) = s^p, G(s) = s^{p+1}/(p+1) on s >= 0; both vanish for s < 0.
class TruncationPair {
 public:
  explicit TruncationPair(double p) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
      throw DomainError("truncation exponent p must lie in (1, inf)");
    }
  }

  double p() const noexcept { return p_; }

  double g(double s) const {
    check_finite(s);
    return s > 0.0 ? std::pow(s, p_) : 0.0;
  }

  double G(double s) const {
    check_finite(s);
    return s > 0.0 ? std::pow(s, p_ + 1.0) / (p_ + 1.0) : 0.0;
  }

 private:
  static void check_finite(double s) {
    if (!std::isfinite(s)) throw DomainError("truncation argument must be finite");
  }

  double p_;
};

enum class TruncProperty { G4, G5, G6, G7, G8 };

inline std::string_view to_string(TruncProperty prop) {
  switch (prop) {
    case TruncProperty::G4: return "G4";
    case TruncProperty::G5: return "G5";
    case TruncProperty::G6: return "G6";
    case TruncProperty::G7: return "G7";
    case TruncProperty::G8: return "G8";
  }
  return "?";
}

inline std::size_t property_arity(TruncProperty prop) {
  switch (prop) {
    case TruncProperty::G7:
    case TruncProperty::G8: return 3;
    default: return 2;
  }
}

/// Both sides of one of the inequalities G4..G8, evaluated at a point.
struct PropertySides {
  double lhs;
  double rhs;
  double gap() const { return rhs - lhs; }
  /// Relative acceptance: gap >= -rel_tol * (1 + |lhs|).
  bool holds(double rel_tol = 1e-9) const { return gap() >= -rel_tol * (1.0 + std::abs(lhs)); }
};

/// Arguments: G4/G5/G6 take (s, tau); G7 takes (s, tau, M); G8 takes (s, tau, eps).
inline PropertySides g_property_sides(const TruncationPair& pair, TruncProperty prop,
                                      std::span<const double> args) {
  if (args.size() != property_arity(prop)) {
    throw DomainError("wrong argument count for property " + std::string(to_string(prop)));
  }
  const double s = args[0];
  const double tau = args[1];
  const double two_p = std::pow(2.0, pair.p());
  switch (prop) {
    case TruncProperty::G4:
      return {pair.G(s), pair.G(s + tau) + pair.G(s - tau)};
    case TruncProperty::G5:
      return {pair.G(std::abs(s) + tau), pair.G(s + tau) + pair.G(-s + tau)};
    case TruncProperty::G6:
      return {pair.G(s + tau), two_p * (pair.G(s) + pair.G(tau))};
    case TruncProperty::G7: {
      const double m = args[2];
      const double four = pair.G(s + tau - m) + pair.G(s - tau - m) + pair.G(-s + tau - m) +
                          pair.G(-s - tau - m);
      return {pair.G(std::abs(s)), two_p * four + two_p * pair.G(m)};
    }
    case TruncProperty::G8: {
      const double eps = args[2];
      if (!(eps > 0.0)) throw DomainError("G8 requires eps > 0");
      const double young = std::pow(pair.p() / eps, pair.p());
      return {pair.g(s) * tau, eps * pair.G(s) + young * pair.G(tau)};
    }
  }
  throw DomainError("unknown truncation property");
}

/// RHS - LHS; nonnegative certifies the property at that point.
inline double g_property_gap(const TruncationPair& pair, TruncProperty prop,
                             std::span<const double> args) {
  return g_property_sides(pair, prop, args).gap();
}

/// eps*a^r + C(eps)*b^q - a*b with C(eps) = (eps*r)^(-q/r)/q, for conjugate r, q.
inline double young_epsilon_gap(double r_exp, double q_exp, double a, double b, double eps) {
  if (!(r_exp > 1.0) || !(q_exp > 1.0)) throw DomainError("Young exponents must exceed 1");
  if (std::abs(1.0 / r_exp + 1.0 / q_exp - 1.0) > 1e-12) {
    throw DomainError("Young exponents must be conjugate: 1/r + 1/q = 1");
  }
  if (a < 0.0 || b < 0.0) throw DomainError("Young arguments must be nonnegative");
  if (!(eps > 0.0)) throw DomainError("Young splitting parameter must be positive");
  const double c_eps = std::pow(eps * r_exp, -q_exp / r_exp) / q_exp;
  return eps * std::pow(a, r_exp) + c_eps * std::pow(b, q_exp) - a * b;
}

/// Envelope e^{int_0^t phi} eta0 + int_0^t e^{int_s^t phi} psi(s) ds on the
/// time nodes `times`, composite trapezoid on every sub-interval.
inline std::vector<double> gronwall_envelope(std::span<const double> phi,
                                             std::span<const double> psi, double eta0,
                                             std::span<const double> times) {
  if (phi.empty() || psi.empty() || times.empty()) throw DomainError("empty Gronwall series");
  if (phi.size() != psi.size() || phi.size() != times.size()) {
    throw DomainError("Gronwall series must have equal length");
  }
  std::vector<double> out(phi.size());
  double growth = 0.0;  // int_0^{t_i} phi
  double forced = 0.0;  // int_0^{t_i} e^{int_s^{t_i} phi} psi(s) ds
  out[0] = eta0;
  for (std::size_t i = 1; i < phi.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(dt > 0.0)) throw DomainError("Gronwall time nodes must be strictly increasing");
    const double step_growth = 0.5 * dt * (phi[i - 1] + phi[i]);
    const double carry = std::exp(step_growth);
    forced = carry * forced + 0.5 * dt * (carry * psi[i - 1] + psi[i]);
    growth += step_growth;
    out[i] = std::exp(growth) * eta0 + forced;
  }
  return out;
}

/// Uniform-step form: node i sits at t = i*dt.
inline std::vector<double> gronwall_envelope(std::span<const double> phi,
                                             std::span<const double> psi, double eta0,
                                             double dt) {
  if (!(dt > 0.0)) throw DomainError("Gronwall step must be positive");
  std::vector<double> times(phi.size());
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i) * dt;
  return gronwall_envelope(phi, psi, eta0, times);
}

}  // namespace issglf
