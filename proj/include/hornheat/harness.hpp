// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Verification harness: grid sweeps comparing the analytic envelopes against
 * Monte Carlo, the survival-bound sweep, the Varopoulos-failure demo, and
 * the asymptotics checks. Everything is emitted as CSV rows plus a flat
 * key = value summary so reports diff cleanly.
 *
 * Comparability is measured, not asserted: rows carry log-ratios against
 * both envelope sides and the summaries report their per-regime ranges. A
 * single global constant per side (the acceptance layer's job) then turns a
 * bounded range into a pass verdict. Zero-hit cells are censored: they keep
 * their rule-of-three error bar, drop out of range statistics, and stay in
 * the row counts.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hornheat/envelopes.hpp"
#include "hornheat/errors.hpp"
#include "hornheat/geometry.hpp"
#include "hornheat/numerics.hpp"
#include "hornheat/params.hpp"
#include "hornheat/reference.hpp"
#include "hornheat/simulate.hpp"

namespace hornheat {

using Point = std::vector<double>;

struct PointPair {
  Point x;
  Point y;
};

struct SweepSpec {
  std::vector<double> t_grid;
  std::vector<PointPair> point_pairs;
  MCConfig mc{};
  EnvelopeConstants consts{};
};

struct ReportRow {
  double t = 0.0;
  Point x;
  Point y;
  Regime regime = Regime::ShortTime;
  double log_lower = kNegInf;
  double log_upper = kPosInf;
  double log_mc = kNegInf;
  double std_error = 0.0;  ///< linear-scale standard error of the estimate
  double ratio_lo = kNaN;  ///< log_mc - log_lower
  double ratio_hi = kNaN;  ///< log_upper - log_mc
  bool censored = false;   ///< zero-hit MC cell (or solver failure)
};

namespace detail {

[[nodiscard]] inline std::string fmt(double v) { return format_scientific(v); }

struct RangeStat {
  long long count = 0;
  long long censored = 0;
  double lo_min = kPosInf, lo_max = kNegInf;
  double hi_min = kPosInf, hi_max = kNegInf;
};

}  // namespace detail

struct VerificationReport {
  int d = 2;
  std::vector<ReportRow> rows;

  /// Columns: t, x0..x{d-1}, y0..y{d-1}, regime, log_lower, log_upper,
  /// log_mc, std_error, ratio_lo, ratio_hi, censored.
  [[nodiscard]] std::string to_csv() const {
    std::string out = "t";
    for (int i = 0; i < d; ++i) out += ",x" + std::to_string(i);
    for (int i = 0; i < d; ++i) out += ",y" + std::to_string(i);
    out +=
        ",regime,log_lower,log_upper,log_mc,std_error,ratio_lo,ratio_hi,"
        "censored\n";
    for (const auto& r : rows) {
      out += detail::fmt(r.t);
      for (double c : r.x) out += "," + detail::fmt(c);
      for (double c : r.y) out += "," + detail::fmt(c);
      out += std::string(",") + to_string(r.regime);
      out += "," + detail::fmt(r.log_lower);
      out += "," + detail::fmt(r.log_upper);
      out += "," + detail::fmt(r.log_mc);
      out += "," + detail::fmt(r.std_error);
      out += "," + detail::fmt(r.ratio_lo);
      out += "," + detail::fmt(r.ratio_hi);
      out += r.censored ? ",1\n" : ",0\n";
    }
    return out;
  }

  /// Per-regime min/max/range of the two log-ratios over non-censored rows,
  /// as flat key = value text.
  [[nodiscard]] std::string summary_text() const {
    std::map<std::string, detail::RangeStat> stats;
    for (const auto& r : rows) {
      auto& s = stats[to_string(r.regime)];
      ++s.count;
      if (r.censored) {
        ++s.censored;
        continue;
      }
      s.lo_min = std::min(s.lo_min, r.ratio_lo);
      s.lo_max = std::max(s.lo_max, r.ratio_lo);
      s.hi_min = std::min(s.hi_min, r.ratio_hi);
      s.hi_max = std::max(s.hi_max, r.ratio_hi);
    }
    long long censored_total = 0;
    for (const auto& r : rows) censored_total += r.censored;
    std::string out;
    out += "rows.count = " + std::to_string(rows.size()) + "\n";
    out += "rows.censored = " + std::to_string(censored_total) + "\n";
    for (const auto& [name, s] : stats) {
      out += name + ".count = " + std::to_string(s.count) + "\n";
      out += name + ".censored = " + std::to_string(s.censored) + "\n";
      if (s.count > s.censored) {
        out += name + ".ratio_lo.min = " + detail::fmt(s.lo_min) + "\n";
        out += name + ".ratio_lo.max = " + detail::fmt(s.lo_max) + "\n";
        out += name + ".ratio_lo.range = " + detail::fmt(s.lo_max - s.lo_min) +
               "\n";
        out += name + ".ratio_hi.min = " + detail::fmt(s.hi_min) + "\n";
        out += name + ".ratio_hi.max = " + detail::fmt(s.hi_max) + "\n";
        out += name + ".ratio_hi.range = " + detail::fmt(s.hi_max - s.hi_min) +
               "\n";
      }
    }
    return out;
  }
};

namespace detail {

inline void check_sweep_inputs(const HornRegion& region,
                               const ReferenceFunction& ref,
                               const ProcessParams& p, const SweepSpec& spec) {
  check_inputs(region, p);
  if (ref.alpha() != region.f().alpha() || ref.f0() != region.f().f0() ||
      ref.kind() != region.f().kind())
    throw domain_error("sweep: reference does not match the region profile");
  if (spec.t_grid.empty()) throw domain_error("sweep: empty t grid");
  if (spec.point_pairs.empty()) throw domain_error("sweep: no point pairs");
  spec.mc.validate();
  spec.consts.validate();
  for (double t : spec.t_grid)
    if (!(t >= spec.mc.step_h))
      throw domain_error("sweep: every t must be >= mc.step_h");
  for (const auto& pr : spec.point_pairs) {
    if (pr.x.size() != static_cast<std::size_t>(p.d) ||
        pr.y.size() != static_cast<std::size_t>(p.d))
      throw domain_error("sweep: point dimension mismatch");
    if (!region.contains(pr.x) || !region.contains(pr.y))
      throw domain_error("sweep: all points must be interior");
  }
}

}  // namespace detail

/// Kernel sweep: for every (pair, t) row, the envelope and a kernel_mc
/// estimate in the log domain. Solver failures censor the row; they never
/// abort the sweep.
[[nodiscard]] inline VerificationReport sweep(const HornRegion& region,
                                              const ReferenceFunction& ref,
                                              const ProcessParams& p,
                                              const SweepSpec& spec,
                                              const T0Config& t0cfg = {}) {
  detail::check_sweep_inputs(region, ref, p, spec);
  VerificationReport rep;
  rep.d = p.d;
  for (const auto& pr : spec.point_pairs) {
    for (double t : spec.t_grid) {
      ReportRow row;
      row.t = t;
      row.x = pr.x;
      row.y = pr.y;
      try {
        const LogEnvelope env =
            envelope(region, p, spec.consts, t, pr.x, pr.y, t0cfg);
        row.regime = env.regime;
        row.log_lower = env.log_lower;
        row.log_upper = env.log_upper;
        const MCResult mc = kernel_mc(region, p, pr.x, pr.y, t, spec.mc);
        row.std_error = mc.std_error;
        row.censored = mc.n_effective == 0;
        row.log_mc = mc.estimate > 0.0 ? std::log(mc.estimate) : kNegInf;
        row.ratio_lo = row.log_mc - row.log_lower;
        row.ratio_hi = row.log_upper - row.log_mc;
      } catch (const solver_error&) {
        row.log_lower = row.log_upper = row.log_mc = kNaN;
        row.ratio_lo = row.ratio_hi = kNaN;
        row.censored = true;
      }
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

/// Survival sweep (one-sided): survival_mc of each distinct spec point
/// against the survival upper bound. Rows reuse the kernel schema with the
/// point duplicated into the y columns and log_lower pinned at -inf.
[[nodiscard]] inline VerificationReport survival_sweep(
    const HornRegion& region, const ReferenceFunction& ref,
    const ProcessParams& p, const SweepSpec& spec, double c2 = 1.0,
    const T0Config& t0cfg = {}) {
  detail::check_sweep_inputs(region, ref, p, spec);
  if (!(c2 > 0.0)) throw domain_error("survival_sweep: c2 > 0 required");
  std::vector<Point> points;
  for (const auto& pr : spec.point_pairs) {
    for (const auto* cand : {&pr.x, &pr.y})
      if (std::find(points.begin(), points.end(), *cand) == points.end())
        points.push_back(*cand);
  }
  VerificationReport rep;
  rep.d = p.d;
  for (const auto& x : points) {
    for (double t : spec.t_grid) {
      ReportRow row;
      row.t = t;
      row.x = x;
      row.y = x;
      try {
        row.regime = classify(region, p, spec.consts, t, x, x, t0cfg);
        row.log_upper = survival_upper_log(region, p, t, x, c2);
        const MCResult mc = survival_mc(region, p, x, t, spec.mc);
        row.std_error = mc.std_error;
        row.censored = mc.estimate == 0.0;
        row.log_mc = mc.estimate > 0.0 ? std::log(mc.estimate) : kNegInf;
        row.ratio_lo = row.log_mc - row.log_lower;
        row.ratio_hi = row.log_upper - row.log_mc;
      } catch (const solver_error&) {
        row.log_upper = row.log_mc = kNaN;
        row.ratio_lo = row.ratio_hi = kNaN;
        row.censored = true;
      }
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

// ==== Varopoulos-failure demo ====

/// One magnitude row: the long-time lower envelope against the product
/// bound free-kernel x survival-upper(x) x survival-upper(y), all analytic.
struct VaropoulosRow {
  double y_mag = 0.0;
  double x_mag = 0.0;        ///< tied to 2 |y|
  Regime regime = Regime::LongTimeIU;  ///< actual classification at t_fixed
  double log_lower_iu = 0.0;  ///< long-time lower envelope (IU branch)
  double log_product = 0.0;   ///< log[free x survival_up(x) x survival_up(y)]
  double gap = 0.0;           ///< log_lower_iu - log_product
  bool flagged = false;       ///< regime mismatch or non-positive gap
};

/// Evaluates the failure of product-form (Varopoulos-type) lower bounds:
/// the gap grows like (d + alpha - 2) log |y| along x = 2|y| axis points.
/// Requires the non-increasing g class (the long-time IU regime).
[[nodiscard]] inline std::vector<VaropoulosRow> varopoulos_demo(
    const HornRegion& region, const ReferenceFunction& ref,
    const ProcessParams& p, const EnvelopeConstants& consts, double t_fixed,
    std::span<const double> y_magnitudes, double c2 = 1.0,
    const T0Config& t0cfg = {}) {
  detail::check_inputs(region, p);
  consts.validate();
  if (ref.g_class() != GMonotone::NonIncreasing)
    throw domain_error("varopoulos_demo: requires NonIncreasing g class");
  if (!(t_fixed > 0.0)) throw domain_error("varopoulos_demo: t_fixed > 0");
  if (y_magnitudes.empty())
    throw domain_error("varopoulos_demo: empty magnitude list");
  const ReferenceFunction& f = region.f();
  const InverseResult s1r = f.s1(consts.j_time_scale * t_fixed);
  const double term =
      std::max(long_time_integral_log(
                   f, p, t_fixed, consts.j_rate,
                   std::log(consts.j_inner_scale) + s1r.log_value),
               -consts.j_tail_rate * t_fixed);
  std::vector<VaropoulosRow> rows;
  rows.reserve(y_magnitudes.size());
  for (double m : y_magnitudes) {
    if (!(m > 0.0)) throw domain_error("varopoulos_demo: magnitudes > 0");
    Point x(static_cast<std::size_t>(p.d), 0.0);
    Point y(static_cast<std::size_t>(p.d), 0.0);
    x[0] = 2.0 * m;
    y[0] = m;
    VaropoulosRow row;
    row.y_mag = m;
    row.x_mag = 2.0 * m;
    row.regime = classify(region, p, consts, t_fixed, x, y, t0cfg);
    row.log_lower_iu = std::log(consts.a_low) + phi_log(region, p, x) +
                       phi_log(region, p, y) + term;
    row.log_product = free_kernel_log(p, t_fixed, dist(x, y)) +
                      survival_upper_log(region, p, t_fixed, x, c2) +
                      survival_upper_log(region, p, t_fixed, y, c2);
    row.gap = row.log_lower_iu - row.log_product;
    row.flagged = row.regime != Regime::LongTimeIU || !(row.gap > 0.0);
    rows.push_back(row);
  }
  return rows;
}

[[nodiscard]] inline std::string varopoulos_to_csv(
    std::span<const VaropoulosRow> rows) {
  std::string out =
      "y_mag,x_mag,regime,log_lower_iu,log_product,gap,flagged\n";
  for (const auto& r : rows) {
    out += detail::fmt(r.y_mag);
    out += "," + detail::fmt(r.x_mag);
    out += std::string(",") + to_string(r.regime);
    out += "," + detail::fmt(r.log_lower_iu);
    out += "," + detail::fmt(r.log_product);
    out += "," + detail::fmt(r.gap);
    out += r.flagged ? ",1\n" : ",0\n";
  }
  return out;
}

// ==== asymptotics suite ====

struct AsymptoticsCheck {
  std::string name;
  bool applicable = false;
  bool passed = false;
  double metric_lo = kNaN;
  double metric_hi = kNaN;
  std::string note;
};

struct AsymptoticsReport {
  std::vector<AsymptoticsCheck> checks;
  bool all_passed = true;

  [[nodiscard]] std::string to_text() const {
    std::string out;
    for (const auto& c : checks) {
      out += "check." + c.name + ".applicable = " +
             (c.applicable ? "1" : "0") + "\n";
      if (!c.applicable) continue;
      out += "check." + c.name + ".passed = " + (c.passed ? "1" : "0") + "\n";
      out += "check." + c.name + ".metric_lo = " + detail::fmt(c.metric_lo) +
             "\n";
      out += "check." + c.name + ".metric_hi = " + detail::fmt(c.metric_hi) +
             "\n";
      if (!c.note.empty())
        out += "check." + c.name + ".note = " + c.note + "\n";
    }
    out += std::string("all_passed = ") + (all_passed ? "1" : "0") + "\n";
    return out;
  }
};

/// Ratio-window checks of the slow-scale asymptotics:
///   t0_window:        t0 / (f^alpha log(2+|x|)) has max/min <= 10 over
///                     |x| = 10^k, k = 0..6 (any profile)
///   j_window:         t^{1/(theta alpha - 1)} log J(t) varies by <= 25%
///                     between neighbors of {0.2, 0.1, 0.05}
///                     (LogPower, theta alpha > 1)
///   f_window:         integral_0^{s0(t)} f^{d-1} ds over the closed-form
///                     F(t) stays inside [1/5, 5] on t in [1e-3, 1]
///                     (PowerLaw)
///   classifier_threshold: large-t regime is LongTimeIU exactly when
///                     theta alpha > 1 (LogPower)
///   fixed_point:      t0 at f = 1, |x| = 0 equals the e^{-tau} = tau root
///                     to 1e-6 (PowerLaw, where f(0) = 1)
[[nodiscard]] inline AsymptoticsReport asymptotics_suite(
    const ReferenceFunction& ref, const ProcessParams& p) {
  p.validate();
  if (ref.alpha() != p.alpha)
    throw domain_error("asymptotics_suite: alpha mismatch");
  if (ref.kind() == ProfileKind::Custom)
    throw domain_error("asymptotics_suite: LogPower or PowerLaw required");
  AsymptoticsReport rep;

  {
    AsymptoticsCheck c;
    c.name = "t0_window";
    c.applicable = true;
    double lo = kPosInf, hi = kNegInf;
    for (int k = 0; k <= 6; ++k) {
      const double m = std::pow(10.0, k);
      const double t0 = ref.t0(m, m, p.d, {});
      const double ratio =
          t0 / (std::pow(ref.eval_f(m), p.alpha) * std::log(2.0 + m));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    c.metric_lo = lo;
    c.metric_hi = hi;
    c.passed = hi <= 10.0 * lo;
    c.note = "window = ratio of t0 to f^alpha log(2+|x|)";
    rep.checks.push_back(std::move(c));
  }

  {
    AsymptoticsCheck c;
    c.name = "j_window";
    const double ta = ref.kind() == ProfileKind::LogPower
                          ? ref.theta() * p.alpha
                          : 0.0;
    c.applicable = ref.kind() == ProfileKind::LogPower && ta > 1.0;
    if (c.applicable) {
      const double ts[] = {0.2, 0.1, 0.05};
      double v[3];
      for (int i = 0; i < 3; ++i) {
        const InverseResult s1r = ref.s1(ts[i]);
        const double logj =
            long_time_integral_log(ref, p, ts[i], 1.0, s1r.log_value);
        v[i] = std::pow(ts[i], 1.0 / (ta - 1.0)) * logj;
      }
      double worst = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double dev = std::abs(v[i + 1] - v[i]) /
                           std::max(std::abs(v[i]), std::abs(v[i + 1]));
        worst = std::max(worst, dev);
      }
      c.metric_lo = std::min({v[0], v[1], v[2]});
      c.metric_hi = std::max({v[0], v[1], v[2]});
      c.passed = worst <= 0.25;
      c.note = "scaled log J at t = 0.2, 0.1, 0.05";
    }
    rep.checks.push_back(std::move(c));
  }

  {
    AsymptoticsCheck c;
    c.name = "f_window";
    c.applicable = ref.kind() == ProfileKind::PowerLaw;
    if (c.applicable) {
      double lo = kPosInf, hi = kNegInf;
      for (int k = 0; k <= 6; ++k) {
        const double t = std::pow(10.0, -3.0 + 0.5 * k);
        const InverseResult s0r = ref.s0(t);
        const double u0 = std::log1p(s0r.value);
        // integral of f^{d-1} ds in u = log(1+s); the integrand is monotone,
        // so its max sits at an endpoint.
        const auto psi = [&](double u) {
          return (p.d - 1) * ref.log_f_u(u) + u;
        };
        const double m = std::max(psi(0.0), psi(u0));
        const double integral =
            m + std::log(adaptive_simpson(
                    [&](double u) { return std::exp(psi(u) - m); }, 0.0, u0,
                    1.0e-10 * std::max(1.0, u0)));
        const double ratio =
            std::exp(integral - example_power_law_F_log(ref.theta(), p, t));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      c.metric_lo = lo;
      c.metric_hi = hi;
      c.passed = lo >= 0.2 && hi <= 5.0;
      c.note = "plain profile integral to s0 over the closed form";
    }
    rep.checks.push_back(std::move(c));
  }

  {
    AsymptoticsCheck c;
    c.name = "classifier_threshold";
    c.applicable = ref.kind() == ProfileKind::LogPower;
    if (c.applicable) {
      const HornRegion region(p.d, ref);
      Point x(static_cast<std::size_t>(p.d), 0.0);
      x[0] = 1.0;
      const Regime r = classify(region, p, EnvelopeConstants{}, 50.0, x, x);
      const bool iu_expected = ref.theta() * p.alpha > 1.0;
      c.passed = r == (iu_expected ? Regime::LongTimeIU
                                   : Regime::LongTimeNonIU);
      c.metric_lo = c.metric_hi = static_cast<double>(r == Regime::LongTimeIU);
      c.note = std::string("large-t regime = ") + to_string(r);
    }
    rep.checks.push_back(std::move(c));
  }

  {
    AsymptoticsCheck c;
    c.name = "fixed_point";
    c.applicable = ref.kind() == ProfileKind::PowerLaw;
    if (c.applicable) {
      const double root = 0.5671432904097838;  // e^{-tau} = tau
      const double t0 = ref.t0(0.0, 0.0, p.d, {});
      c.metric_lo = c.metric_hi = t0;
      c.passed = std::abs(t0 - root) <= 1.0e-6;
      c.note = "t0 at f = 1, |x| = 0";
    }
    rep.checks.push_back(std::move(c));
  }

  for (const auto& c : rep.checks)
    if (c.applicable && !c.passed) rep.all_passed = false;
  return rep;
}

}  // namespace hornheat
