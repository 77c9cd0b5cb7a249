#pragma once

// Comparison functions (class K, K-infinity, KL) and the small amount of
// algebra the ISS estimates need: bracketed inversion and gain composition.

#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <utility>

#include "issglf/errors.hpp"

namespace issglf {

/// A strictly increasing scalar map on [domain_lo, domain_hi].
///
/// Monotonicity is spot-checked at construction on kMonotoneSamples evenly
/// spaced points. When flagged class-K the map must also vanish at the origin.
class MonotoneFn {
 public:
  static constexpr int kMonotoneSamples = 257;

  MonotoneFn(std::function<double(double)> eval, double domain_lo, double domain_hi,
             std::string label, bool class_k = false)
      : eval_(std::move(eval)),
        lo_(domain_lo),
        hi_(domain_hi),
        label_(std::move(label)),
        class_k_(class_k) {
    if (!eval_) throw DomainError("monotone map '" + label_ + "' has no evaluator");
    if (!(hi_ > lo_)) throw DomainError("monotone map '" + label_ + "' has an empty domain");
    double prev = eval_(lo_);
    for (int i = 1; i < kMonotoneSamples; ++i) {
      const double x = lo_ + (hi_ - lo_) * static_cast<double>(i) / (kMonotoneSamples - 1);
      const double v = eval_(x);
      if (!(v > prev)) {
        throw DomainError("map '" + label_ + "' is not strictly increasing near " +
                          std::to_string(x));
      }
      prev = v;
    }
    if (class_k_) {
      if (lo_ > 0.0) throw DomainError("class-K map '" + label_ + "' must contain 0");
      if (eval_(0.0) != 0.0) throw DomainError("class-K map '" + label_ + "' must vanish at 0");
    }
  }

  double operator()(double x) const { return eval_(x); }
  double domain_lo() const noexcept { return lo_; }
  double domain_hi() const noexcept { return hi_; }
  const std::string& label() const noexcept { return label_; }
  bool class_k() const noexcept { return class_k_; }

 private:
  std::function<double(double)> eval_;
  double lo_;
  double hi_;
  std::string label_;
  bool class_k_;
};

/// beta(s, t) = amplitude(s) * exp(-rate * t).
class KLBound {
 public:
  KLBound(MonotoneFn amplitude, double rate) : amplitude_(std::move(amplitude)), rate_(rate) {
    if (!(rate_ > 0.0)) throw DomainError("KL decay rate must be positive");
  }
  double operator()(double s, double t) const { return amplitude_(s) * std::exp(-rate_ * t); }
  double rate() const noexcept { return rate_; }

 private:
  MonotoneFn amplitude_;
  double rate_;
};

/// Bisection for f(x) = y on [lo, hi]; returns x with |f(x) - y| <= tol.
inline double invert_monotone(const MonotoneFn& f, double y, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("inversion tolerance must be positive");
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (y < f_lo || y > f_hi) {
    throw BracketError("value " + std::to_string(y) + " outside [f(lo), f(hi)] for '" +
                       f.label() + "'");
  }
  if (std::abs(f_lo - y) <= tol) return lo;
  if (std::abs(f_hi - y) <= tol) return hi;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid - y) <= tol || mid == lo || mid == hi) return mid;
    if (f_mid < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// gamma(s) = 2 psi1(2 rho(s)) + mu(rho(s)).
inline double iss_gain(const MonotoneFn& psi1, const MonotoneFn& rho,
                               const MonotoneFn& mu, double s) {
  if (s < 0.0) throw DomainError("gain argument must be nonnegative");
  const double r = rho(s);
  return 2.0 * psi1(2.0 * r) + mu(r);
}

struct ParabolicPsiSet {
  MonotoneFn psi1;  // upper sandwich: s^{p+1}/(p+1)
  MonotoneFn psi2;  // lower sandwich: s^{p+1}/(2^p (p+1))
  MonotoneFn mu;    // truncation-level penalty: 2 s^{p+1}
};

/// Sandwich maps for the truncated energy at exponent p. Domain [0, domain_hi].
inline ParabolicPsiSet parabolic_psi_set(double p, double domain_hi = 1e3) {
  if (!(p > 1.0)) throw DomainError("psi set requires p > 1");
  auto power = [p](double scale) {
    return [p, scale](double s) { return scale * std::pow(s, p + 1.0); };
  };
  return ParabolicPsiSet{
      MonotoneFn(power(1.0 / (p + 1.0)), 0.0, domain_hi, "psi1", true),
      MonotoneFn(power(1.0 / (std::pow(2.0, p) * (p + 1.0))), 0.0, domain_hi, "psi2", true),
      MonotoneFn(power(2.0), 0.0, domain_hi, "mu", true),
  };
}

}  // namespace issglf
