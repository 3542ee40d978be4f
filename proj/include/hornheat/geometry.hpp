// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * The horn-shaped region and the auxiliary test domains.
 *
 * The region in R^d (d >= 2), writing x = (x1, xt) with xt in R^{d-1}:
 *
 *   D = { x1 <= 0, |x| < f(0) }  union  { x1 > 0, |xt| < f(x1) }
 *
 * i.e. a spherical cap of radius f(0) capping a surface of revolution whose
 * radius profile is the reference function f. Membership is strict, so
 * boundary points are outside.
 *
 * Rotational symmetry about the x1 axis reduces every metric question to
 * the profile half-plane (u, v) = (x1, |xt|), v >= 0, whose generating
 * boundary curve is
 *
 *   Gamma = { (s, f(s)) : s >= 0 }  union  { |p| = f(0), p_u <= 0 },
 *
 * and the distance to the boundary of D equals the planar distance to
 * Gamma (the nearest boundary point lies on the meridian through x).
 */

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "hornheat/errors.hpp"
#include "hornheat/numerics.hpp"
#include "hornheat/reference.hpp"

namespace hornheat {

/// Point of the profile half-plane: u is the axial coordinate, v = |xt| >= 0.
struct ProfilePoint {
  double u;
  double v;
};

class HornRegion {
 public:
  HornRegion(int d, ReferenceFunction f, double c_star = 0.2)
      : d_(d), f_(std::move(f)), c_star_(c_star) {
    if (d < 2) throw domain_error("HornRegion: d >= 2 required");
    if (!(c_star > 0.0) || c_star > 0.2 + 1e-12)
      throw domain_error("HornRegion: c_star in (0, 0.2] required");
  }

  [[nodiscard]] int dim() const noexcept { return d_; }
  [[nodiscard]] const ReferenceFunction& f() const noexcept { return f_; }
  [[nodiscard]] double c_star() const noexcept { return c_star_; }
  [[nodiscard]] double cap_radius() const { return f_.f0(); }

  [[nodiscard]] ProfilePoint profile(std::span<const double> x) const {
    check_dim(x);
    return {x[0], tail_norm(x)};
  }

  [[nodiscard]] bool contains(std::span<const double> x) const {
    check_dim(x);
    if (x[0] <= 0.0) return norm2(x) < f_.f0();
    return tail_norm(x) < f_.eval_f(x[0]);
  }

  [[nodiscard]] bool contains_profile(ProfilePoint p) const {
    if (p.v < 0.0) throw domain_error("contains_profile: v >= 0 required");
    if (p.u <= 0.0) return std::hypot(p.u, p.v) < f_.f0();
    return p.v < f_.eval_f(p.u);
  }

  /// Distance to the boundary of D; 0 outside the closure (clamped).
  [[nodiscard]] double delta(std::span<const double> x) const {
    return delta_profile(profile(x));
  }

  [[nodiscard]] double delta_profile(ProfilePoint p) const {
    if (!contains_profile(p)) return 0.0;
    return std::min(wall_distance(p).dist, cap_distance(p).dist);
  }

  /// Interior point xi* = z_x + r (x - z_x)/|x - z_x| at distance r from the
  /// nearest boundary point z_x of x, the center of an interior ball of
  /// radius r. Requires contains(x) and 0 < r <= c_star * f(x1 v 0); the
  /// postcondition delta(xi*) >= r (1 - 1e-6) is verified.
  [[nodiscard]] std::vector<double> interior_ball_point(
      std::span<const double> x, double r) const {
    if (!contains(x)) throw domain_error("interior_ball_point: x not in D");
    const double fx = f_.eval_f(x[0]);
    if (!(r > 0.0) || r > c_star_ * fx)
      throw domain_error(
          "interior_ball_point: r in (0, c_star * f(x1)] required");
    const ProfilePoint p = profile(x);
    const auto wall = wall_distance(p);
    const auto cap = cap_distance(p);
    // Ties break toward the wall side (deterministic).
    const Nearest z = wall.dist <= cap.dist ? wall : cap;
    // Inward unit direction in the profile plane.
    const double du = p.u - z.pu;
    const double dv = p.v - z.pv;
    const double dn = std::hypot(du, dv);
    std::vector<double> xi(x.begin(), x.end());
    // |.| on v: the profile half-plane is the quotient of a reflection
    // symmetry, so an overshoot across the axis folds back distance-free.
    ProfilePoint q{z.pu + r * du / dn, std::abs(z.pv + r * dv / dn)};
    lift(q, x, xi);
    const double got = delta_profile(q);
    if (!(got >= r * (1.0 - 1e-6)))
      throw solver_error("interior_ball_point: interior radius postcondition",
                         r, got, r - got);
    return xi;
  }

 private:
  struct Nearest {
    double dist;
    double pu;
    double pv;
  };

  void check_dim(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_)
      throw domain_error("HornRegion: point dimension mismatch");
  }

  /// Distance from a profile point to the wall curve {(s, f(s)) : s >= 0}.
  /// Coarse seeding (>= 64 nodes) over the Lipschitz-sized window
  /// [u - W, u + W], W = (v + f(u v 0)) (1 + L), then golden-section
  /// refinement to absolute tolerance 1e-10 f(0).
  [[nodiscard]] Nearest wall_distance(ProfilePoint p) const {
    const double L = f_.lipschitz_bound();
    const double W = (p.v + f_.eval_f(std::max(p.u, 0.0))) * (1.0 + L);
    const double lo = std::max(0.0, p.u - W);
    const double hi = std::max(lo, p.u + W);
    const auto d2 = [&](double s) {
      const double du = p.u - s;
      const double dv = p.v - f_.eval_f(s);
      return du * du + dv * dv;
    };
    constexpr int kSeeds = 96;
    double best_s = lo;
    double best = d2(lo);
    for (int i = 1; i <= kSeeds; ++i) {
      const double s = lo + (hi - lo) * i / kSeeds;
      const double v = d2(s);
      if (v < best) {
        best = v;
        best_s = s;
      }
    }
    const double cell = (hi - lo) / kSeeds;
    const double a = std::max(lo, best_s - cell);
    const double b = std::min(hi, best_s + cell);
    const double s_min =
        b > a ? golden_section_min(d2, a, b, 1e-10 * f_.f0()) : best_s;
    const double s_star = d2(s_min) < best ? s_min : best_s;
    return {std::sqrt(d2(s_star)), s_star, f_.eval_f(s_star)};
  }

  /// Distance from a profile point to the cap arc {|p| = f(0), p_u <= 0}.
  /// For points with u <= 0 the nearest circle point shares the direction
  /// of p and lies on the arc; for u > 0 the nearest arc point is the
  /// junction (0, f(0)).
  [[nodiscard]] Nearest cap_distance(ProfilePoint p) const {
    const double r0 = f_.f0();
    if (p.u > 0.0) return {std::hypot(p.u, p.v - r0), 0.0, r0};
    const double n = std::hypot(p.u, p.v);
    if (n == 0.0) return {r0, -r0, 0.0};  // center: nearest is the pole
    return {std::abs(n - r0), p.u * r0 / n, p.v * r0 / n};
  }

  /// Lift a profile point back to R^d along the meridian of x. An axis
  /// point (|xt| = 0) has no meridian; the second coordinate direction is
  /// used (deterministic tie-break).
  void lift(ProfilePoint q, std::span<const double> x,
            std::vector<double>& out) const {
    out[0] = q.u;
    const double vx = tail_norm(x);
    if (vx > 0.0) {
      for (int i = 1; i < d_; ++i) out[i] = x[i] * (q.v / vx);
    } else {
      for (int i = 1; i < d_; ++i) out[i] = 0.0;
      out[1] = q.v;
    }
  }

  int d_;
  ReferenceFunction f_;
  double c_star_;
};

// ==== auxiliary domains (oracle tests and free-space simulation) ====

/// Open ball of the given radius centered at the origin.
class BallDomain {
 public:
  BallDomain(int d, double radius) : d_(d), radius_(radius) {
    if (d < 1 || !(radius > 0.0))
      throw domain_error("BallDomain: d >= 1, radius > 0");
  }
  [[nodiscard]] int dim() const noexcept { return d_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }
  [[nodiscard]] bool contains(std::span<const double> x) const {
    return norm2(x) < radius_;
  }
  [[nodiscard]] double delta(std::span<const double> x) const {
    return std::max(0.0, radius_ - norm2(x));
  }

 private:
  int d_;
  double radius_;
};

/// All of R^d: the no-killing variant used to test the free kernel.
class FreeSpace {
 public:
  explicit FreeSpace(int d) : d_(d) {
    if (d < 1) throw domain_error("FreeSpace: d >= 1");
  }
  [[nodiscard]] int dim() const noexcept { return d_; }
  [[nodiscard]] bool contains(std::span<const double>) const { return true; }

 private:
  int d_;
};

}  // namespace hornheat
