// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Two-sided heat-kernel envelopes for the killed stable process on a horn
 * region, evaluated entirely in the natural-log domain (the long-time
 * integral and its s1 upper limit overflow doubles long before the regimes
 * of interest are exhausted).
 *
 * Building blocks:
 *
 *   p(t,x,y)  ~ t^{-d/alpha} ^ t |x-y|^{-(d+alpha)}          (free kernel)
 *   Psi(t,x)  = [delta^{a/2} (f(x1)^{a/2} ^ t^{1/2}) / (t^1)] ^ 1
 *   phi(x)    = delta^{a/2} f(x1)^{a/2} / (1+|x|)^{d+alpha}
 *
 * Regimes by time scale (F = f(x1) v f(y1), cutoffs scaled by constants):
 *
 *   ShortTime      t <= c_short F^alpha ^ 1 :   p Psi Psi
 *   Intermediate   t <= c_long agg(t0)    :   p Psi Psi e^{-kappa t F^-a}
 *   LongTimeIU     (g non-increasing)     :   phi phi max{J(t), e^{-rt}}
 *   LongTimeNonIU  (g non-decreasing)     :   phi phi e^{-t}
 *
 * where agg is max over the two points for the non-increasing g class and
 * min for the non-decreasing class, and
 *
 *   J(t) = integral_0^{j_inner_scale s1(j_time_scale t)}
 *              f(s)^{d-1} e^{-j_rate t f(s)^{-alpha}} ds.
 *
 * Both envelope sides share one J; the two-sided gap comes from the a_low /
 * a_up prefactors and the kappa pair. Ties in the classifier resolve to the
 * earlier regime, and every input is symmetrized before dispatch, so
 * envelope(t,x,y) == envelope(t,y,x) exactly.
 */

#include <algorithm>
#include <cmath>
#include <span>

#include "hornheat/errors.hpp"
#include "hornheat/geometry.hpp"
#include "hornheat/numerics.hpp"
#include "hornheat/params.hpp"
#include "hornheat/reference.hpp"

namespace hornheat {

enum class Regime { ShortTime, Intermediate, LongTimeIU, LongTimeNonIU };

[[nodiscard]] inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::ShortTime:
      return "ShortTime";
    case Regime::Intermediate:
      return "Intermediate";
    case Regime::LongTimeIU:
      return "LongTimeIU";
    case Regime::LongTimeNonIU:
      return "LongTimeNonIU";
  }
  return "?";
}

/// Multiplicative constants of the envelope family. Defaults are the
/// conservative factory settings; every acceptance tolerance is pinned
/// against them.
struct EnvelopeConstants {
  double c_short = 1.0;  ///< short-time cutoff scale on F^alpha
  double c_long = 1.0;   ///< intermediate cutoff scale on agg(t0)
  double kappa_low = 4.0;
  double kappa_up = 0.25;
  double a_low = 0.01;
  double a_up = 100.0;
  double j_inner_scale = 1.0;  ///< scales s1 inside the J upper limit
  double j_time_scale = 1.0;   ///< scales t inside s1
  double j_rate = 1.0;         ///< rate in the J integrand exponential
  double j_tail_rate = 1.0;    ///< rate of the e^{-rt} floor term

  void validate() const {
    if (!(c_short > 0.0) || !(c_long > 0.0) || !(j_inner_scale > 0.0) ||
        !(j_time_scale > 0.0) || !(j_rate > 0.0) || !(j_tail_rate > 0.0))
      throw domain_error("EnvelopeConstants: scales and rates must be > 0");
    if (!(kappa_low >= kappa_up) || !(kappa_up > 0.0))
      throw domain_error("EnvelopeConstants: kappa_low >= kappa_up > 0");
    if (!(a_low > 0.0) || !(a_low <= a_up))
      throw domain_error("EnvelopeConstants: 0 < a_low <= a_up");
  }
};

struct LogEnvelope {
  double log_lower;
  double log_upper;
  Regime regime;
};

namespace detail {

inline void check_inputs(const HornRegion& region, const ProcessParams& p) {
  p.validate();
  if (region.dim() != p.d)
    throw domain_error("envelopes: region dimension != ProcessParams.d");
  if (region.f().alpha() != p.alpha)
    throw domain_error("envelopes: reference alpha != ProcessParams.alpha");
}

}  // namespace detail

// ==== pointwise building blocks ====

/// log of t^{-d/alpha} ^ (t r^{-(d+alpha)}); r = 0 picks the first branch.
[[nodiscard]] inline double free_kernel_log(const ProcessParams& p, double t,
                                            double r) {
  p.validate();
  if (!(t > 0.0)) throw domain_error("free_kernel_log: t > 0 required");
  if (!(r >= 0.0)) throw domain_error("free_kernel_log: r >= 0 required");
  const double diag = -(p.d / p.alpha) * std::log(t);
  if (r == 0.0) return diag;
  return std::min(diag, std::log(t) - (p.d + p.alpha) * std::log(r));
}

/// log Psi from precomputed delta and f(x1); nonpositive by construction.
[[nodiscard]] inline double psi_log_parts(double alpha, double t, double delta,
                                          double fx1) {
  if (!(t > 0.0)) throw domain_error("psi_log_parts: t > 0 required");
  if (!(delta > 0.0) || !(fx1 > 0.0))
    throw domain_error("psi_log_parts: delta > 0 and f(x1) > 0 required");
  const double half_a = 0.5 * alpha;
  const double core = half_a * std::log(delta) +
                      std::min(half_a * std::log(fx1), 0.5 * std::log(t)) -
                      std::log(std::min(t, 1.0));
  return std::min(core, 0.0);
}

[[nodiscard]] inline double psi_log(const HornRegion& region,
                                    const ProcessParams& p, double t,
                                    std::span<const double> x) {
  detail::check_inputs(region, p);
  if (!region.contains(x)) throw domain_error("psi_log: x not in D");
  return psi_log_parts(p.alpha, t, region.delta(x),
                       region.f().eval_f(x[0]));
}

/// log phi from precomputed parts.
[[nodiscard]] inline double phi_log_parts(const ProcessParams& p, double delta,
                                          double fx1, double abs_x) {
  if (!(delta > 0.0) || !(fx1 > 0.0))
    throw domain_error("phi_log_parts: delta > 0 and f(x1) > 0 required");
  return 0.5 * p.alpha * (std::log(delta) + std::log(fx1)) -
         (p.d + p.alpha) * std::log1p(abs_x);
}

[[nodiscard]] inline double phi_log(const HornRegion& region,
                                    const ProcessParams& p,
                                    std::span<const double> x) {
  detail::check_inputs(region, p);
  if (!region.contains(x)) throw domain_error("phi_log: x not in D");
  return phi_log_parts(p, region.delta(x), region.f().eval_f(x[0]),
                       norm2(x));
}

/// t0 of a point of R^d through the region's reference function.
[[nodiscard]] inline double point_t0(const HornRegion& region,
                                     const ProcessParams& p,
                                     std::span<const double> x,
                                     const T0Config& cfg = {}) {
  detail::check_inputs(region, p);
  return region.f().t0(x[0], norm2(x), p.d, cfg);
}

// ==== regime classification ====

[[nodiscard]] inline Regime classify(const HornRegion& region,
                                     const ProcessParams& p,
                                     const EnvelopeConstants& consts, double t,
                                     std::span<const double> x,
                                     std::span<const double> y,
                                     const T0Config& t0cfg = {}) {
  detail::check_inputs(region, p);
  consts.validate();
  if (!(t > 0.0)) throw domain_error("classify: t > 0 required");
  if (!region.contains(x) || !region.contains(y))
    throw domain_error("classify: both points must lie in D");
  const ReferenceFunction& f = region.f();
  const double F = std::max(f.eval_f(x[0]), f.eval_f(y[0]));
  const double short_cut =
      std::min(consts.c_short * std::pow(F, p.alpha), 1.0);
  if (t <= short_cut) return Regime::ShortTime;
  const double tx = f.t0(x[0], norm2(x), p.d, t0cfg);
  const double ty = f.t0(y[0], norm2(y), p.d, t0cfg);
  const bool g_dec = f.g_class() == GMonotone::NonIncreasing;
  const double agg = g_dec ? std::max(tx, ty) : std::min(tx, ty);
  if (t <= consts.c_long * agg) return Regime::Intermediate;
  return g_dec ? Regime::LongTimeIU : Regime::LongTimeNonIU;
}

// ==== long-time integral ====

/// log of J = integral_0^S f(s)^{d-1} e^{-rate t f(s)^{-alpha}} ds, where
/// upper_log = log S (S may exceed double range). Substituting s = e^u - 1
/// turns [0, S] into [0, log(1+S)]; the integral is accumulated per unit-u
/// panel with adaptive Simpson under a per-panel max-log shift and combined
/// by log-sum-exp.
[[nodiscard]] inline double long_time_integral_log(const ReferenceFunction& f,
                                                   const ProcessParams& p,
                                                   double t, double rate,
                                                   double upper_log) {
  p.validate();
  if (f.alpha() != p.alpha)
    throw domain_error("long_time_integral_log: alpha mismatch");
  if (!(t > 0.0) || !(rate > 0.0))
    throw domain_error("long_time_integral_log: t > 0, rate > 0 required");
  if (!std::isfinite(upper_log))
    throw domain_error("long_time_integral_log: upper limit must be finite");
  const double u_max =
      upper_log > 36.0 ? upper_log : std::log1p(std::exp(upper_log));
  if (!(u_max > 0.0)) return kNegInf;
  // log integrand after substitution (du picks up the e^u Jacobian, and
  // log(e^u du) folds the +u term in).
  const auto log_integrand = [&](double u) {
    const double lf = f.log_f_u(u);
    return (p.d - 1) * lf - rate * t * std::exp(-p.alpha * lf) + u;
  };
  double acc_m = kNegInf;  // running max of panel logs
  double acc = 0.0;        // sum of exp(panel_log - acc_m)
  const double n_panels = std::ceil(u_max);
  if (n_panels > 5.0e6)
    throw solver_error("long_time_integral_log: panel count overflow", 0.0,
                       u_max, n_panels);
  double prev_panel_max = kPosInf;
  for (double k = 0.0; k < u_max; k += 1.0) {
    const double a = k;
    const double b = std::min(k + 1.0, u_max);
    double m = kNegInf;
    for (int i = 0; i <= 4; ++i)
      m = std::max(m, log_integrand(a + (b - a) * i / 4.0));
    // Past the peak the integrand decays monotonically; once panels are
    // negligible relative to the running max they stay negligible.
    if (m < acc_m - 60.0 && m < prev_panel_max) break;
    prev_panel_max = m;
    if (m == kNegInf) continue;
    const double integral = adaptive_simpson(
        [&](double u) { return std::exp(log_integrand(u) - m); }, a, b,
        1.0e-8);
    if (!(integral > 0.0)) continue;
    const double panel_log = m + std::log(integral);
    if (panel_log > acc_m) {
      acc *= std::exp(acc_m - panel_log);
      acc_m = panel_log;
    }
    acc += std::exp(panel_log - acc_m);
  }
  if (acc_m == kNegInf) return kNegInf;
  return acc_m + std::log(acc);
}

// ==== the envelope ====

[[nodiscard]] inline LogEnvelope envelope(const HornRegion& region,
                                          const ProcessParams& p,
                                          const EnvelopeConstants& consts,
                                          double t, std::span<const double> x,
                                          std::span<const double> y,
                                          const T0Config& t0cfg = {}) {
  const Regime regime = classify(region, p, consts, t, x, y, t0cfg);
  const ReferenceFunction& f = region.f();
  const double la_low = std::log(consts.a_low);
  const double la_up = std::log(consts.a_up);
  switch (regime) {
    case Regime::ShortTime:
    case Regime::Intermediate: {
      const double core = free_kernel_log(p, t, dist(x, y)) +
                          psi_log(region, p, t, x) + psi_log(region, p, t, y);
      if (regime == Regime::ShortTime)
        return {la_low + core, la_up + core, regime};
      const double F = std::max(f.eval_f(x[0]), f.eval_f(y[0]));
      const double tF = t * std::exp(-p.alpha * std::log(F));
      return {la_low + core - consts.kappa_low * tF,
              la_up + core - consts.kappa_up * tF, regime};
    }
    case Regime::LongTimeIU: {
      const double core = phi_log(region, p, x) + phi_log(region, p, y);
      const InverseResult s1r = f.s1(consts.j_time_scale * t);
      const double term =
          std::max(long_time_integral_log(
                       f, p, t, consts.j_rate,
                       std::log(consts.j_inner_scale) + s1r.log_value),
                   -consts.j_tail_rate * t);
      return {la_low + core + term, la_up + core + term, regime};
    }
    case Regime::LongTimeNonIU: {
      // The decay rate is exactly 1 on both sides in this regime.
      const double core = phi_log(region, p, x) + phi_log(region, p, y);
      return {la_low + core - t, la_up + core - t, regime};
    }
  }
  throw domain_error("envelope: unreachable");
}

// ==== survival and exit-time bounds ====

/// log of the survival upper bound
///   Psi(t,x) min{ e^{-c2 t f(x1)^{-alpha}} + t (1+|x|)^{-(d+alpha-1)},
///                 e^{-c2 t} },
/// with the inner sum evaluated by log-sum-exp.
[[nodiscard]] inline double survival_upper_log(const HornRegion& region,
                                               const ProcessParams& p, double t,
                                               std::span<const double> x,
                                               double c2) {
  detail::check_inputs(region, p);
  if (!(t > 0.0) || !(c2 > 0.0))
    throw domain_error("survival_upper_log: t > 0, c2 > 0 required");
  if (!region.contains(x)) throw domain_error("survival_upper_log: x not in D");
  const double psi = psi_log(region, p, t, x);
  const double fpow =
      std::exp(-p.alpha * std::log(region.f().eval_f(x[0])));
  const double sum = log_sum_exp(
      -c2 * t * fpow,
      std::log(t) - (p.d + p.alpha - 1.0) * std::log1p(norm2(x)));
  return psi + std::min(sum, -c2 * t);
}

/// log of the mean exit-time upper bound delta^{a/2} (f^{a/2} ^ t^{1/2}).
[[nodiscard]] inline double expected_exit_time_upper_log(
    const HornRegion& region, const ProcessParams& p, double t,
    std::span<const double> x) {
  detail::check_inputs(region, p);
  if (!(t > 0.0))
    throw domain_error("expected_exit_time_upper_log: t > 0 required");
  if (!region.contains(x))
    throw domain_error("expected_exit_time_upper_log: x not in D");
  const double half_a = 0.5 * p.alpha;
  return half_a * std::log(region.delta(x)) +
         std::min(half_a * std::log(region.f().eval_f(x[0])),
                  0.5 * std::log(t));
}

// ==== intrinsic-ultracontractivity constant ====

/// log of the IU coupling constant:
///   t <= cutoff : t^{-2-d/alpha} (1 + s1(j_time_scale t))^{2d+2alpha}
///   t >  cutoff : max{ J(t), e^{-j_tail_rate t} }
/// Requires the NonIncreasing g class.
[[nodiscard]] inline double iu_constant_log(const ReferenceFunction& f,
                                            const ProcessParams& p, double t,
                                            double cutoff,
                                            const EnvelopeConstants& consts) {
  p.validate();
  consts.validate();
  if (f.alpha() != p.alpha)
    throw domain_error("iu_constant_log: alpha mismatch");
  if (f.g_class() != GMonotone::NonIncreasing)
    throw domain_error("iu_constant_log: requires NonIncreasing g class");
  if (!(t > 0.0) || !(cutoff > 0.0))
    throw domain_error("iu_constant_log: t > 0, cutoff > 0 required");
  const InverseResult s1r = f.s1(consts.j_time_scale * t);
  if (t <= cutoff) {
    const double log1p_s1 = s1r.finite && s1r.value < 1.0e15
                                ? std::log1p(s1r.value)
                                : s1r.log_value;
    return (-2.0 - p.d / p.alpha) * std::log(t) +
           (2.0 * p.d + 2.0 * p.alpha) * log1p_s1;
  }
  const double J = long_time_integral_log(
      f, p, t, consts.j_rate, std::log(consts.j_inner_scale) + s1r.log_value);
  return std::max(J, -consts.j_tail_rate * t);
}

// ==== worked example tables ====

/// Branch cutoff multipliers of the log-power table (all default 1).
struct LogPowerCutoffs {
  double b1 = 1.0;  ///< theta > 1/alpha: end of the free regime, on t1
  double b2 = 1.0;  ///< theta > 1/alpha: end of the log-decay regime, on t2
  double b3 = 1.0;  ///< theta > 1/alpha: absolute end of the stretched regime
  double b4 = 1.0;  ///< theta <= 1/alpha: end of the free regime, on t1
  double b5 = 1.0;  ///< theta <= 1/alpha: end of the log-decay regime, on t2
};

struct LogPowerBranch {
  int branch;        ///< 1-based branch index within the applicable case
  double log_value;  ///< log of the comparability-class representative
  double exp_arg;    ///< argument of the branch's exponential factor
};

/// Closed-form comparability table for the log-power profile
/// f(s) = log(2+s)^{-theta}, with cutoff times
///   t1 = log(e + |x|^|y|)^{-theta alpha},
///   t2 = log(e + |x|^|y|)^{-(theta alpha - 1)}   (^ = min).
[[nodiscard]] inline LogPowerBranch example_log_power_table_log(
    const HornRegion& region, const ProcessParams& p, double t,
    std::span<const double> x, std::span<const double> y,
    const LogPowerCutoffs& cuts = {}) {
  detail::check_inputs(region, p);
  if (region.f().kind() != ProfileKind::LogPower)
    throw domain_error(
        "example_log_power_table_log: region profile must be LogPower");
  if (!(t > 0.0)) throw domain_error("example_log_power_table_log: t > 0");
  if (!region.contains(x) || !region.contains(y))
    throw domain_error("example_log_power_table_log: points must lie in D");
  const double theta = region.f().theta();
  const double ta = theta * p.alpha;
  const double ax = norm2(x);
  const double ay = norm2(y);
  const double e = std::exp(1.0);
  const double ell_m = std::log(e + std::min(ax, ay));
  const double ell_x = std::log(e + ax);
  const double ell_y = std::log(e + ay);
  const double t1 = std::pow(ell_m, -ta);
  const double t2 = std::pow(ell_m, 1.0 - ta);
  const double dx = region.delta(x);
  const double dy = region.delta(y);
  const double half_a = 0.5 * p.alpha;
  // Per-point factors of the three shapes.
  const auto psit = [&](double delta, double ell) {
    return std::min(0.0, half_a * std::log(delta) +
                             std::min(-0.5 * ta * std::log(ell),
                                      0.5 * std::log(t)) -
                             std::log(t));
  };
  const auto mid = [&](double delta, double ell) {
    return half_a * std::log(delta) - 0.5 * ta * std::log(ell) - std::log(t);
  };
  const auto spatial = [&](double delta, double ell, double a) {
    return half_a * std::log(delta) - 0.5 * ta * std::log(ell) -
           (p.d + p.alpha) * std::log1p(a);
  };
  const double fk = free_kernel_log(p, t, dist(x, y));
  if (ta > 1.0) {
    if (t <= cuts.b1 * t1)
      return {1, fk + psit(dx, ell_x) + psit(dy, ell_y), 0.0};
    if (t <= cuts.b2 * t2) {
      const double arg = -t * std::pow(ell_m, ta);
      return {2, fk + mid(dx, ell_x) + mid(dy, ell_y) + arg, arg};
    }
    const double sp = spatial(dx, ell_x, ax) + spatial(dy, ell_y, ay);
    if (t <= cuts.b3) {
      const double arg = std::pow(t, -1.0 / (ta - 1.0));
      return {3, sp + arg, arg};
    }
    return {4, sp - t, -t};
  }
  if (t <= cuts.b4 * t1)
    return {1, fk + psit(dx, ell_x) + psit(dy, ell_y), 0.0};
  if (t <= cuts.b5 * t2) {
    const double arg = -t * std::pow(ell_m, ta);
    return {2, fk + mid(dx, ell_x) + mid(dy, ell_y) + arg, arg};
  }
  return {3, spatial(dx, ell_x, ax) + spatial(dy, ell_y, ay) - t, -t};
}

/// log F(t) of the power-law profile example:
///   F(t) = 1 v t^{-(1+theta(1-d))/(theta alpha)}   if theta != 1/(d-1)
///   F(t) = log(1 + 1/t)                            if theta == 1/(d-1)
/// The borderline test is exact up to relative tolerance 1e-12.
[[nodiscard]] inline double example_power_law_F_log(double theta,
                                                    const ProcessParams& p,
                                                    double t) {
  p.validate();
  if (!(theta > 0.0) || !(t > 0.0))
    throw domain_error("example_power_law_F_log: theta > 0, t > 0 required");
  const double k = theta * (p.d - 1);
  if (std::abs(k - 1.0) <= 1.0e-12 * std::max(1.0, k))
    return std::log(std::log1p(1.0 / t));
  const double expo = -(1.0 + theta * (1.0 - p.d)) / (theta * p.alpha);
  return std::max(0.0, expo * std::log(t));
}

}  // namespace hornheat
