// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Counter-based random streams for the Monte Carlo engine.
 *
 * Every path owns an independent stream keyed by (seed, path_index): the
 * initial state is the splitmix64 finalizer applied to the pair, and draws
 * advance a splitmix64 sequence from that state. Path results therefore do
 * not depend on how paths are distributed over worker threads, which is what
 * makes estimator output bit-identical across parallelism degrees.
 */

#include <cmath>
#include <cstdint>

#include "hornheat/numerics.hpp"

namespace hornheat {

/// splitmix64 finalizer; used both for key derivation and stream stepping.
[[nodiscard]] inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path_index) {
    const std::uint64_t k = mix64(seed + 0x9E3779B97F4A7C15ULL);
    state_ = mix64(k ^ (path_index * 0xD1B54A32D192ED03ULL + 1));
  }

  [[nodiscard]] std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform in the open interval (0, 1); never returns 0 or 1, so logs of
  /// draws are always finite.
  [[nodiscard]] double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  [[nodiscard]] double exponential() { return -std::log(uniform_open()); }

  /// Standard normal via Box-Muller; the pair's second member is cached, so
  /// a path consumes exactly one (u, u) pair per two normals.
  [[nodiscard]] double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Gamma(shape, 1) for shape > 0. Marsaglia-Tsang squeeze for shape >= 1,
  /// boosted by U^{1/shape} below 1. Rejection draws stay inside this path's
  /// stream, so determinism is unaffected.
  [[nodiscard]] double gamma(double shape) {
    if (!(shape > 0.0)) throw domain_error("PathRng::gamma: shape > 0");
    if (shape < 1.0) {
      const double u = uniform_open();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform_open();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
        return d * v;
    }
  }

 private:
  std::uint64_t state_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hornheat
