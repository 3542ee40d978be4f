// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Reference profile of the horn: a positive non-increasing f on [0, inf)
 * with a doubling bound, extended by f(0) to the negative axis, together
 * with the derived quantities the envelope layer needs:
 *
 *   g(s)  = f(s)^alpha * log(2+s)              (canonical representative)
 *   s0(t) = max(inf{s > 0 : f(s)^alpha <= t}, 2)
 *   s1(t) = max(inf{s >= 0 : g(s) <= t}, 2)
 *   t0(x) = unique tau solving e^{-c tau f(x1)^{-alpha}}
 *                              = tau (1+|x|)^{-(d+alpha-1)}
 *
 * All inverse problems are solved by bisection on u = log(1+s), so values
 * beyond double range are still usable through their logarithms. Upper
 * brackets double from 4 and give up at 1e300 (sentinel +inf).
 *
 * The monotone class of g is declared at construction and sanity-checked by
 * sampling on a geometric grid; it describes the monotone comparator of g,
 * so for the power-law kind with small theta*alpha (where the exact g has
 * one bounded hump before decaying) the check starts at the analytic point
 * beyond which g is provably monotone. Custom profiles are checked from the
 * caller-declared point (default 0), so a genuinely non-monotone custom g is
 * rejected rather than guessed.
 */

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "hornheat/errors.hpp"
#include "hornheat/numerics.hpp"

namespace hornheat {

enum class GMonotone { NonIncreasing, NonDecreasing };

enum class ProfileKind { LogPower, PowerLaw, Custom };

/// Parameters of the t0 solver. c is the rate constant inside the defining
/// exponential; tau_max caps the bracket; rel_tol bounds both the bisection
/// width and the residual postcondition.
struct T0Config {
  double c = 1.0;
  double tau_max = 1.0e3;
  double rel_tol = 1.0e-12;
};

/// Result of a generalized inverse: value (possibly +inf) plus its log, so
/// callers can keep working after the value itself overflows a double.
/// finite == isfinite(value); log_value is +inf only for the genuine
/// empty-set sentinel (never reached inside the bracket cap).
struct InverseResult {
  double value;
  double log_value;
  bool finite;
};

class ReferenceFunction {
 public:
  struct CustomSpec {
    std::function<double(double)> f;
    double lipschitz_bound = 0.0;
    double doubling_bound = 0.0;  ///< K with f(s) <= K f(2s) on [0, inf)
    GMonotone g_class = GMonotone::NonIncreasing;
    double g_monotone_from = 0.0;  ///< g is claimed monotone on [here, inf)
  };

  // ==== factories ====

  /// f(s) = log(2+s)^{-theta}. g = log(2+s)^{1-theta*alpha} is exactly
  /// monotone: decreasing iff theta*alpha > 1.
  static ReferenceFunction log_power(double theta, double alpha) {
    return log_power(theta, alpha,
                     theta * alpha > 1.0 ? GMonotone::NonIncreasing
                                         : GMonotone::NonDecreasing);
  }

  static ReferenceFunction log_power(double theta, double alpha,
                                     GMonotone declared) {
    ReferenceFunction r(ProfileKind::LogPower, theta, alpha, declared);
    r.lipschitz_ = 0.5 * theta * std::pow(std::log(2.0), -theta - 1.0);
    r.doubling_ = std::pow(2.0, theta);
    r.g_monotone_from_ = 0.0;
    r.validate();
    return r;
  }

  /// f(s) = (1+s)^{-theta}. g -> 0 always, so the comparator class is
  /// NonIncreasing; the exact g is monotone from
  /// s = e^{1/(theta*alpha)} - 2 on (and everywhere once
  /// theta*alpha >= 1/(2 log 2)).
  static ReferenceFunction power_law(double theta, double alpha) {
    return power_law(theta, alpha, GMonotone::NonIncreasing);
  }

  static ReferenceFunction power_law(double theta, double alpha,
                                     GMonotone declared) {
    ReferenceFunction r(ProfileKind::PowerLaw, theta, alpha, declared);
    r.lipschitz_ = theta;
    r.doubling_ = std::pow(2.0, theta);
    const double ta = theta * alpha;
    r.g_monotone_from_ =
        ta >= 1.0 / (2.0 * std::log(2.0)) ? 0.0 : std::exp(1.0 / ta) - 2.0;
    r.validate();
    return r;
  }

  static ReferenceFunction custom(CustomSpec spec, double alpha) {
    ReferenceFunction r(ProfileKind::Custom, 0.0, alpha, spec.g_class);
    if (!spec.f) throw domain_error("ReferenceFunction: custom f is empty");
    if (!(spec.lipschitz_bound >= 0.0) || !(spec.doubling_bound >= 1.0))
      throw domain_error(
          "ReferenceFunction: custom profile needs lipschitz_bound >= 0 and "
          "doubling_bound >= 1");
    r.custom_ = std::move(spec.f);
    r.lipschitz_ = spec.lipschitz_bound;
    r.doubling_ = spec.doubling_bound;
    r.g_monotone_from_ = std::max(0.0, spec.g_monotone_from);
    r.validate();
    return r;
  }

  // ==== profile evaluation ====

  /// f extended to all of R by f(s) = f(0) for s < 0.
  [[nodiscard]] double eval_f(double s) const { return f_raw(std::max(s, 0.0)); }

  /// g(s) = f(s)^alpha * log(2+s), the canonical monotone-comparator
  /// representative. Defined for s > 0 only.
  [[nodiscard]] double eval_g(double s) const {
    if (!(s > 0.0)) throw domain_error("eval_g: s > 0 required");
    return std::pow(f_raw(s), alpha_) * std::log(2.0 + s);
  }

  /// log f(e^u - 1) for u >= 0, stable far beyond double range of s.
  [[nodiscard]] double log_f_u(double u) const {
    if (!(u >= 0.0)) throw domain_error("log_f_u: u >= 0 required");
    switch (kind_) {
      case ProfileKind::LogPower:
        // log(2+s) = log(1+e^u)
        return -theta_ * std::log(log1p_exp(u));
      case ProfileKind::PowerLaw:
        // 1+s = e^u
        return -theta_ * u;
      case ProfileKind::Custom: {
        if (u > 700.0)
          throw domain_error(
              "log_f_u: custom profiles are limited to double-range "
              "arguments");
        return std::log(f_raw(std::expm1(u)));
      }
    }
    return kNaN;
  }

  /// log g(e^u - 1) for u >= 0.
  [[nodiscard]] double log_g_u(double u) const {
    return alpha_ * log_f_u(u) + std::log(log1p_exp(u));
  }

  // ==== generalized inverses ====

  /// s0(t) = max(inf{s > 0 : f(s)^alpha <= t}, 2); +inf sentinel when
  /// lim f > t^{1/alpha} (possible only for custom profiles with positive
  /// limit, or beyond the 1e300 bracket cap).
  [[nodiscard]] InverseResult s0(double t) const {
    if (!(t > 0.0)) throw domain_error("s0: t > 0 required");
    const double log_t = std::log(t);
    // f(0)^alpha <= t: every s > 0 qualifies, infimum 0, clamp to 2.
    if (alpha_ * std::log(f0()) <= log_t) return clamp2(0.0);
    return invert_decreasing(
        [this, log_t](double u) { return alpha_ * log_f_u(u) - log_t; }, 0.0,
        kS0S1RelTol);
  }

  /// s1(t) = max(g^{-1}(t), 2) with g^{-1}(t) = inf{s >= 0 : g(s) <= t}.
  /// Only meaningful (and only permitted) for the NonIncreasing class.
  [[nodiscard]] InverseResult s1(double t) const {
    if (gclass_ != GMonotone::NonIncreasing)
      throw domain_error(
          "s1: defined only for profiles whose g-class is NonIncreasing");
    if (!(t > 0.0)) throw domain_error("s1: t > 0 required");
    const double log_t = std::log(t);
    // g(0+) = f(0)^alpha log 2 <= t: infimum 0 (g has at most one hump and
    // only dips below its left limit on the far side), clamp to 2.
    if (log_g_u(0.0) <= log_t) return clamp2(0.0);
    return invert_decreasing(
        [this, log_t](double u) { return log_g_u(u) - log_t; }, 0.0,
        kS0S1RelTol);
  }

  // ==== t0 solver ====

  /// Unique tau with e^{-c tau f(x1)^{-alpha}} = tau (1+|x|)^{-(d+alpha-1)}.
  /// Solved in log form; throws solver_error if the root exceeds
  /// cfg.tau_max or the residual postcondition fails.
  [[nodiscard]] double t0(double x1, double abs_x, int d,
                          const T0Config& cfg = {}) const {
    if (d < 2) throw domain_error("t0: d >= 2 required");
    if (!(abs_x >= 0.0)) throw domain_error("t0: |x| >= 0 required");
    if (!(cfg.c > 0.0) || !(cfg.tau_max > 0.0) || !(cfg.rel_tol > 0.0))
      throw domain_error("t0: T0Config fields must be positive");
    const double fpow = std::pow(eval_f(x1), -alpha_);
    const double decay = (d + alpha_ - 1.0) * std::log1p(abs_x);
    // h(tau) = -c tau f^{-alpha} - log tau + decay, strictly decreasing,
    // +inf at 0+; root is unique.
    const auto h = [&](double tau) {
      return -cfg.c * tau * fpow - std::log(tau) + decay;
    };
    if (h(cfg.tau_max) > 0.0)
      throw solver_error("t0: root exceeds tau_max bracket cap", cfg.tau_max,
                         cfg.tau_max, h(cfg.tau_max));
    // Bisect on log tau for uniform relative resolution.
    double lo = std::log(std::min(1e-300, cfg.tau_max));
    double hi = std::log(cfg.tau_max);
    const double root_log = bisect_decreasing(
        [&](double lt) { return h(std::exp(lt)); }, lo, hi, 0.25 * cfg.rel_tol);
    const double tau = std::exp(root_log);
    // Residual postcondition in the original (non-log) formulation.
    const double lhs = std::exp(-cfg.c * tau * fpow);
    const double rhs = tau * std::exp(-decay);
    const double resid = std::abs(lhs - rhs);
    if (resid > 64.0 * cfg.rel_tol * std::max(lhs, rhs))
      throw solver_error("t0: residual postcondition failed", tau, tau, resid);
    return tau;
  }

  // ==== accessors ====

  [[nodiscard]] ProfileKind kind() const noexcept { return kind_; }
  [[nodiscard]] double theta() const noexcept { return theta_; }
  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double f0() const { return f_raw(0.0); }
  [[nodiscard]] double lipschitz_bound() const noexcept { return lipschitz_; }

  /// Config override of the stored Lipschitz bound. Only widening is sound:
  /// the geometry's wall search derives its bracketing window from this
  /// bound, and a smaller value than the profile's own could miss the
  /// nearest wall point.
  void widen_lipschitz(double bound) {
    if (!(bound >= lipschitz_))
      throw domain_error(
          "ReferenceFunction: lipschitz override must be >= the profile's "
          "own bound");
    lipschitz_ = bound;
  }
  [[nodiscard]] double doubling_bound() const noexcept { return doubling_; }
  [[nodiscard]] GMonotone g_class() const noexcept { return gclass_; }
  [[nodiscard]] double g_monotone_from() const noexcept {
    return g_monotone_from_;
  }

 private:
  static constexpr double kS0S1RelTol = 1.0e-10;
  static constexpr double kMonotoneTol = 1.0e-12;  // f checks, relative
  static constexpr double kGClassTol = 1.0e-9;     // g class check, relative
  static constexpr double kBracketCapLog = 690.77552789821368;  // log 1e300

  ReferenceFunction(ProfileKind kind, double theta, double alpha,
                    GMonotone gclass)
      : kind_(kind), theta_(theta), alpha_(alpha), gclass_(gclass) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
      throw domain_error("ReferenceFunction: alpha in (0, 2) required");
    if (kind != ProfileKind::Custom && !(theta > 0.0))
      throw domain_error("ReferenceFunction: theta > 0 required");
  }

  [[nodiscard]] double f_raw(double s) const {
    switch (kind_) {
      case ProfileKind::LogPower:
        return std::pow(std::log(2.0 + s), -theta_);
      case ProfileKind::PowerLaw:
        return std::pow(1.0 + s, -theta_);
      case ProfileKind::Custom:
        return custom_(s);
    }
    return kNaN;
  }

  [[nodiscard]] static InverseResult clamp2(double s_candidate) {
    const double v = std::max(s_candidate, 2.0);
    return {v, std::log(v), true};
  }

  /// Shared bisection body for s0/s1: G(u) is the log-residual at
  /// u = log(1+s), positive at u_lo, (eventually) negative. Upper bracket
  /// doubles from log(1+4) and gives up at s = 1e300.
  template <class G>
  [[nodiscard]] InverseResult invert_decreasing(G&& g, double u_lo,
                                                double utol) const {
    if (!(g(u_lo) > 0.0)) return clamp2(std::expm1(std::min(u_lo, 700.0)));
    // Upper bracket: s doubles from 4 until sign change or the 1e300 cap.
    double log_s_hi = std::log(4.0);
    double u_hi = log1p_exp(log_s_hi);  // u = log(1+s)
    while (g(u_hi) > 0.0) {
      log_s_hi += std::log(2.0);
      if (log_s_hi > kBracketCapLog) return {kPosInf, kPosInf, false};
      u_hi = log1p_exp(log_s_hi);
    }
    const double u = bisect_decreasing(g, u_lo, u_hi, utol);
    // log s = u + log(1 - e^{-u})
    const double log_s = u + std::log1p(-std::exp(-u));
    if (log_s <= std::log(2.0)) return clamp2(2.0);
    return {u > 709.0 ? kPosInf : std::expm1(u), log_s, u <= 709.0};
  }

  void validate() const {
    if (!(f0() > 0.0) || !std::isfinite(f0()))
      throw domain_error("ReferenceFunction: f(0) must be positive finite");
    // Geometric sample grid 2^k covering [9.5e-7, 1.2e18].
    double prev_f = f0();
    for (int k = -20; k <= 60; ++k) {
      const double s = std::pow(2.0, k);
      const double fs = f_raw(s);
      if (!(fs > 0.0) || !std::isfinite(fs))
        throw domain_error("ReferenceFunction: f must stay positive finite");
      if (fs > prev_f * (1.0 + kMonotoneTol))
        throw domain_error("ReferenceFunction: f must be non-increasing");
      if (fs > doubling_ * f_raw(2.0 * s) * (1.0 + kMonotoneTol))
        throw domain_error(
            "ReferenceFunction: doubling bound f(s) <= K f(2s) violated");
      prev_f = fs;
    }
    // g class check on the declared monotone region.
    const double from = std::max(g_monotone_from_, 1.0e-6);
    double prev_g = eval_g(from);
    for (int k = 0; k <= 80; ++k) {
      const double s = from * std::pow(2.0, k);
      if (s > 1.0e18) break;
      const double gs = eval_g(s);
      const bool bad = gclass_ == GMonotone::NonIncreasing
                           ? gs > prev_g * (1.0 + kGClassTol)
                           : gs < prev_g * (1.0 - kGClassTol);
      if (bad)
        throw domain_error(
            "ReferenceFunction: sampled g contradicts the declared monotone "
            "class");
      prev_g = gs;
    }
  }

  ProfileKind kind_;
  double theta_;
  double alpha_;
  GMonotone gclass_;
  double lipschitz_ = 0.0;
  double doubling_ = 1.0;
  double g_monotone_from_ = 0.0;
  std::function<double(double)> custom_;
};

}  // namespace hornheat
