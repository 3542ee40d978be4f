// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Shared numeric kernels: stable log-domain arithmetic, bracketed root
 * finding, golden-section minimisation, adaptive Simpson quadrature, and
 * the sphere/ball measure constants used by the estimators.
 *
 * Everything here is deterministic and allocation-free except for the
 * span-based log-sum-exp.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hornheat/errors.hpp"

namespace hornheat {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Round-trip-exact scientific notation (%.17e) with readable spellings
/// for non-finite values; the one numeric output format of every tool.
[[nodiscard]] inline std::string format_scientific(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

/// log(1 + e^x) without overflow for large |x|.
[[nodiscard]] inline double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

/// log(e^a + e^b); tolerates -inf arguments.
[[nodiscard]] inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

[[nodiscard]] inline double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

// ==== small vector helpers (points are flat double spans) ====

[[nodiscard]] inline double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Euclidean norm of x[1..d-1], the coordinates transverse to the horn axis.
[[nodiscard]] inline double tail_norm(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

[[nodiscard]] inline double dist(std::span<const double> x,
                                 std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// ==== measure constants ====

/// log of the volume of the d-dimensional ball of radius r.
[[nodiscard]] inline double ball_volume_log(int d, double r) {
  if (d < 1 || r <= 0.0) throw domain_error("ball_volume_log: d >= 1, r > 0");
  return 0.5 * d * std::log(kPi) - std::lgamma(0.5 * d + 1.0) +
         d * std::log(r);
}

/// Surface measure of the unit sphere S^{d-1} in R^d.
[[nodiscard]] inline double sphere_surface(int d) {
  if (d < 1) throw domain_error("sphere_surface: d >= 1");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// log Beta(a, b).
[[nodiscard]] inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// ==== root bracketing and bisection ====

/// Bisection for a function with F(lo) > 0 >= F(hi), F decreasing across the
/// bracket's unique sign change. Converges to absolute x-tolerance xtol.
template <class F>
[[nodiscard]] double bisect_decreasing(F&& f, double lo, double hi,
                                       double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo > 0.0) || fhi > 0.0)
    throw solver_error("bisect_decreasing: bracket does not straddle root", lo,
                       hi, std::min(flo, fhi));
  for (int i = 0; i < 400 && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// ==== golden-section minimisation ====

/// Minimises a unimodal f on [a, b] to absolute x-tolerance xtol, floored
/// at the local double resolution: far from the origin one ulp of the
/// abscissa can exceed any fixed xtol, and the interval stops shrinking.
/// Returns the abscissa of the located minimum.
template <class F>
[[nodiscard]] double golden_section_min(F&& f, double a, double b,
                                        double xtol) {
  constexpr double invphi = 0.6180339887498948482;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while ((b - a) > std::max(xtol, 4.0 * eps * (std::abs(a) + std::abs(b)))) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

// ==== adaptive Simpson quadrature ====

namespace detail {

template <class F>
double simpson_step(F& f, double a, double m, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integral of f over [a, b] with absolute tolerance tol.
template <class F>
[[nodiscard]] double adaptive_simpson(F&& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, m, b, fa, fm, fb, whole, tol, 32);
}

}  // namespace hornheat
