// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Monte Carlo machinery for the isotropic alpha-stable process killed on
 * exiting a domain: an Euler jump chain on a fixed time grid plus estimators
 * for survival probability, the transition density (hard-ball kernel), mean
 * exit time, and the complement jump intensity.
 *
 * Determinism contract: every estimate is a pure function of (seed, n_paths,
 * step_h) and is bit-identical for every parallelism degree. Paths draw from
 * counter-based generators keyed by (seed, path_index); workers only write
 * per-path slots or integer partials, and floating-point reductions run
 * sequentially in path order after the parallel section.
 */

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <charconv>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hornheat/errors.hpp"
#include "hornheat/geometry.hpp"
#include "hornheat/numerics.hpp"
#include "hornheat/params.hpp"
#include "hornheat/rng.hpp"

namespace hornheat {

struct MCConfig {
  long long n_paths = 10000;
  double step_h = 1.0e-3;
  std::uint64_t seed = 1;
  double box_radius = 0.05;  ///< radius of the density estimator's ball
  int parallelism = 0;       ///< worker threads; 0 = hardware concurrency

  void validate() const {
    if (n_paths <= 0) throw config_error("MCConfig: n_paths must be > 0");
    if (!(step_h > 0.0)) throw config_error("MCConfig: step_h must be > 0");
    if (!(box_radius > 0.0))
      throw config_error("MCConfig: box_radius must be > 0");
    if (parallelism < 0)
      throw config_error("MCConfig: parallelism must be >= 0");
  }
};

struct MCResult {
  double estimate;
  double std_error;
  long long n_effective;
};

/// Worker count: the explicit request if positive, else hardware
/// concurrency, capped by the HORNHEAT_THREADS environment variable.
/// A malformed HORNHEAT_THREADS value is a configuration error.
[[nodiscard]] inline int resolve_parallelism(int requested) {
  int base = requested > 0
                 ? requested
                 : static_cast<int>(
                       std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("HORNHEAT_THREADS")) {
    const std::string s(env);
    int cap = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec != std::errc{} || ptr != s.data() + s.size() || cap < 1)
      throw config_error("HORNHEAT_THREADS must be an integer >= 1");
    base = std::min(base, cap);
  }
  return base;
}

[[nodiscard]] inline int resolve_parallelism(const MCConfig& cfg) {
  return resolve_parallelism(cfg.parallelism);
}

namespace detail {

/// Shared precondition check for the path estimators. Everything that
/// simulate_killed_path could throw for is rejected here, before any worker
/// thread starts (an exception escaping a std::thread would terminate).
inline void check_path_inputs(const ProcessParams& p,
                              std::span<const double> x, double t,
                              const MCConfig& cfg) {
  p.validate();
  cfg.validate();
  if (x.size() != static_cast<std::size_t>(p.d))
    throw domain_error("simulator: start point dimension mismatch");
  if (!(t >= cfg.step_h))
    throw domain_error("simulator: horizon t >= step_h required");
}

/// Runs body(lo, hi) over a partition of [0, n) on `workers` threads. The
/// partition depends on the worker count, so bodies must write only to
/// per-index slots or commutative-exact (integer) accumulators.
template <class Body>
void parallel_chunks(long long n, int workers, Body&& body) {
  if (n <= 0) return;
  const int w = static_cast<int>(
      std::min<long long>(std::max(workers, 1), n));
  if (w == 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int k = 0; k < w; ++k) {
    const long long lo = n * k / w;
    const long long hi = n * (k + 1) / w;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

// ==== sampling primitives ====

/// Draw from the standard positive stable law with E[e^{-lambda S}] =
/// e^{-lambda^index} (uniform-exponential transform; evaluated in logs so
/// extreme angles cannot overflow intermediate sines).
[[nodiscard]] inline double sample_one_sided_stable(double index,
                                                    PathRng& rng) {
  if (!(index > 0.0) || !(index < 1.0))
    throw domain_error("sample_one_sided_stable: index in (0,1) required");
  const double b = index;
  const double u = kPi * rng.uniform_open();
  const double e = rng.exponential();
  const double log_a = (b / (1.0 - b)) * std::log(std::sin(b * u)) +
                       std::log(std::sin((1.0 - b) * u)) -
                       (1.0 / (1.0 - b)) * std::log(std::sin(u));
  return std::exp(((1.0 - b) / b) * (log_a - std::log(e)));
}

/// Draw X_h with characteristic function exp(-h |xi|^alpha): a Gaussian
/// vector subordinated by a scaled positive (alpha/2)-stable draw.
inline void sample_stable_increment(const ProcessParams& p, double h,
                                    PathRng& rng, std::span<double> out) {
  if (!(h > 0.0)) throw domain_error("sample_stable_increment: h > 0");
  const double s = sample_one_sided_stable(0.5 * p.alpha, rng);
  const double scale = std::pow(h, 1.0 / p.alpha) * std::sqrt(2.0 * s);
  for (auto& c : out) c = scale * rng.normal();
}

/// Default increment source; a custom Sampler with the same call shape can
/// replace it in simulate_killed_path (e.g. a zero sampler in tests).
struct StableSampler {
  void operator()(const ProcessParams& p, double h, PathRng& rng,
                  std::span<double> out) const {
    sample_stable_increment(p, h, rng, out);
  }
};

// ==== killed path ====

struct PathOutcome {
  bool alive;            ///< still inside the domain at time t
  long long exit_step;   ///< first grid index outside (1-based); n if alive
  double exit_time;      ///< grid time of exit, or t when alive/censored
};

namespace detail {

/// Grid size for horizon t at step h; the final step is shortened so the
/// chain lands exactly at t (and is never given negative length by rounding).
[[nodiscard]] inline long long grid_steps(double t, double h) {
  auto n = static_cast<long long>(std::ceil(t / h));
  if (n < 1) n = 1;
  if (static_cast<double>(n - 1) * h >= t && n > 1) --n;
  return n;
}

}  // namespace detail

/// Euler jump chain at times h, 2h, ..., t; killed at the first grid time
/// outside the domain. endpoint receives the final position (the exit
/// position if killed). A start outside the domain is reported as an
/// immediate kill, per the killed-process convention.
template <class Domain, class Sampler>
[[nodiscard]] PathOutcome simulate_killed_path(const Domain& dom,
                                               const ProcessParams& p,
                                               std::span<const double> x,
                                               double t, const MCConfig& cfg,
                                               PathRng& rng, Sampler&& sampler,
                                               std::span<double> endpoint) {
  p.validate();
  cfg.validate();
  if (!(t >= cfg.step_h))
    throw domain_error("simulate_killed_path: t >= step_h required");
  if (x.size() != static_cast<std::size_t>(p.d) || endpoint.size() != x.size())
    throw domain_error("simulate_killed_path: dimension mismatch");
  std::copy(x.begin(), x.end(), endpoint.begin());
  if (!dom.contains(x)) return {false, 0, 0.0};
  const long long n = detail::grid_steps(t, cfg.step_h);
  std::vector<double> inc(x.size());
  for (long long k = 1; k <= n; ++k) {
    const double hk =
        k < n ? cfg.step_h : t - static_cast<double>(n - 1) * cfg.step_h;
    sampler(p, hk, rng, std::span<double>(inc));
    for (std::size_t i = 0; i < inc.size(); ++i) endpoint[i] += inc[i];
    if (!dom.contains(endpoint)) {
      const double when = k < n ? static_cast<double>(k) * cfg.step_h : t;
      return {false, k, when};
    }
  }
  return {true, n, t};
}

template <class Domain>
[[nodiscard]] PathOutcome simulate_killed_path(const Domain& dom,
                                               const ProcessParams& p,
                                               std::span<const double> x,
                                               double t, const MCConfig& cfg,
                                               PathRng& rng,
                                               std::span<double> endpoint) {
  return simulate_killed_path(dom, p, x, t, cfg, rng, StableSampler{},
                              endpoint);
}

// ==== estimators ====

template <class Domain>
[[nodiscard]] MCResult survival_mc(const Domain& dom, const ProcessParams& p,
                                   std::span<const double> x, double t,
                                   const MCConfig& cfg) {
  detail::check_path_inputs(p, x, t, cfg);
  const long long n = cfg.n_paths;
  std::vector<std::uint8_t> alive(static_cast<std::size_t>(n), 0);
  detail::parallel_chunks(n, resolve_parallelism(cfg),
                          [&](long long lo, long long hi) {
                            std::vector<double> end(x.size());
                            for (long long i = lo; i < hi; ++i) {
                              PathRng rng(cfg.seed, i);
                              const auto o = simulate_killed_path(
                                  dom, p, x, t, cfg, rng, end);
                              alive[static_cast<std::size_t>(i)] = o.alive;
                            }
                          });
  long long count = 0;
  for (auto a : alive) count += a;
  const double ph = static_cast<double>(count) / static_cast<double>(n);
  const double se = std::sqrt(ph * (1.0 - ph) / static_cast<double>(n));
  return {ph, se, n};
}

/// Hard-ball density estimator at several targets over one shared path
/// ensemble; element j matches a standalone kernel_mc call at target j
/// exactly (the per-path generators make the ensembles identical).
template <class Domain>
[[nodiscard]] std::vector<MCResult> kernel_mc_multi(
    const Domain& dom, const ProcessParams& p, std::span<const double> x,
    std::span<const std::vector<double>> targets, double t,
    const MCConfig& cfg) {
  detail::check_path_inputs(p, x, t, cfg);
  for (const auto& y : targets)
    if (y.size() != x.size())
      throw domain_error("kernel_mc_multi: target dimension mismatch");
  const long long n = cfg.n_paths;
  const std::size_t m = targets.size();
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(n) * m, 0);
  detail::parallel_chunks(
      n, resolve_parallelism(cfg), [&](long long lo, long long hi) {
        std::vector<double> end(x.size());
        for (long long i = lo; i < hi; ++i) {
          PathRng rng(cfg.seed, i);
          const auto o = simulate_killed_path(dom, p, x, t, cfg, rng, end);
          if (!o.alive) continue;
          for (std::size_t j = 0; j < m; ++j)
            hit[static_cast<std::size_t>(i) * m + j] =
                dist(end, targets[j]) < cfg.box_radius;
        }
      });
  const double vol =
      std::exp(ball_volume_log(p.d, cfg.box_radius));
  std::vector<MCResult> out;
  out.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    long long hits = 0;
    for (long long i = 0; i < n; ++i)
      hits += hit[static_cast<std::size_t>(i) * m + j];
    const double nn = static_cast<double>(n);
    if (hits == 0) {
      // Rule-of-three 95% upper bound stands in for the binomial error.
      out.push_back({0.0, 3.0 / (nn * vol), 0});
    } else {
      const double ph = static_cast<double>(hits) / nn;
      out.push_back({ph / vol, std::sqrt(ph * (1.0 - ph) / nn) / vol, hits});
    }
  }
  return out;
}

template <class Domain>
[[nodiscard]] MCResult kernel_mc(const Domain& dom, const ProcessParams& p,
                                 std::span<const double> x,
                                 std::span<const double> y, double t,
                                 const MCConfig& cfg) {
  const std::vector<std::vector<double>> targets{
      std::vector<double>(y.begin(), y.end())};
  return kernel_mc_multi(dom, p, x, targets, t, cfg)[0];
}

/// Mean exit time censored at the horizon. Per-path times are exact
/// multiples of step_h, so sums are integer step counts scaled once.
template <class Domain>
[[nodiscard]] MCResult exit_time_mc(const Domain& dom, const ProcessParams& p,
                                    std::span<const double> x, double horizon,
                                    const MCConfig& cfg) {
  detail::check_path_inputs(p, x, horizon, cfg);
  const long long n = cfg.n_paths;
  const long long n_steps = detail::grid_steps(horizon, cfg.step_h);
  // Per-path exit step; n_steps stands for "exit at the horizon or alive".
  std::vector<long long> step(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> exited(static_cast<std::size_t>(n), 0);
  detail::parallel_chunks(n, resolve_parallelism(cfg),
                          [&](long long lo, long long hi) {
                            std::vector<double> end(x.size());
                            for (long long i = lo; i < hi; ++i) {
                              PathRng rng(cfg.seed, i);
                              const auto o = simulate_killed_path(
                                  dom, p, x, horizon, cfg, rng, end);
                              step[static_cast<std::size_t>(i)] =
                                  o.alive ? n_steps : o.exit_step;
                              exited[static_cast<std::size_t>(i)] = !o.alive;
                            }
                          });
  long long sum_k = 0;         // steps of exits strictly before the horizon
  unsigned __int128 sum_k2 = 0;
  long long at_horizon = 0;    // censored paths and exits on the final step
  long long n_exited = 0;
  for (long long i = 0; i < n; ++i) {
    const long long k = step[static_cast<std::size_t>(i)];
    n_exited += exited[static_cast<std::size_t>(i)];
    if (k >= n_steps) {
      ++at_horizon;
    } else {
      sum_k += k;
      sum_k2 += static_cast<unsigned __int128>(k) *
                static_cast<unsigned __int128>(k);
    }
  }
  const double nn = static_cast<double>(n);
  const double h = cfg.step_h;
  const double mean = (h * static_cast<double>(sum_k) +
                       horizon * static_cast<double>(at_horizon)) /
                      nn;
  const double m2 = h * h * static_cast<double>(sum_k2) +
                    horizon * horizon * static_cast<double>(at_horizon);
  double se = 0.0;
  if (n > 1) {
    const double var = std::max(0.0, (m2 - nn * mean * mean) / (nn - 1.0));
    se = std::sqrt(var / nn);
  }
  return {mean, se, n_exited};
}

/// Importance-sampling estimate of the complement intensity
/// integral_{D^c} |x - z|^{-(d+alpha)} dz, the raw (constant-free) killing
/// rate at x. The proposal density is q(z) ~ (delta + |z-x|)^{-(d+alpha)}
/// with delta = dist(x, boundary); its radial part is delta times a
/// Beta-prime(d, alpha) ratio of Gamma draws, its normalizer is
/// surface(S^{d-1}) delta^{-alpha} B(d, alpha), and every accepted sample
/// has r >= delta, so weights are bounded by 2^{d+alpha} Z_q.
template <class Domain>
[[nodiscard]] MCResult complement_intensity_mc(const Domain& dom,
                                               const ProcessParams& p,
                                               std::span<const double> x,
                                               long long n_samples,
                                               std::uint64_t seed) {
  p.validate();
  if (n_samples <= 0)
    throw domain_error("complement_intensity_mc: n_samples > 0 required");
  if (x.size() != static_cast<std::size_t>(p.d))
    throw domain_error("complement_intensity_mc: dimension mismatch");
  if (!dom.contains(x))
    throw domain_error("complement_intensity_mc: x must lie inside");
  const double delta = dom.delta(x);
  const double dpa = p.d + p.alpha;
  const double log_zq = std::log(sphere_surface(p.d)) -
                        p.alpha * std::log(delta) + log_beta(p.d, p.alpha);
  const long long n = n_samples;
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  detail::parallel_chunks(
      n, resolve_parallelism(0), [&](long long lo, long long hi) {
        std::vector<double> z(x.size());
        for (long long i = lo; i < hi; ++i) {
          PathRng rng(seed, i);
          double nrm = 0.0;
          do {
            for (auto& c : z) c = rng.normal();
            nrm = norm2(z);
          } while (!(nrm > 0.0));
          const double r = delta * rng.gamma(p.d) / rng.gamma(p.alpha);
          for (std::size_t j = 0; j < z.size(); ++j)
            z[j] = x[j] + r * z[j] / nrm;
          if (!dom.contains(z))
            w[static_cast<std::size_t>(i)] =
                std::exp(log_zq + dpa * std::log1p(delta / r));
        }
      });
  double sum = 0.0;
  double sum2 = 0.0;
  long long nonzero = 0;
  for (double wi : w) {
    sum += wi;
    sum2 += wi * wi;
    nonzero += wi != 0.0;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  double se = 0.0;
  if (n > 1) {
    const double var = std::max(0.0, (sum2 - nn * mean * mean) / (nn - 1.0));
    se = std::sqrt(var / nn);
  }
  return {mean, se, nonzero};
}

}  // namespace hornheat
