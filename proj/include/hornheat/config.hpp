// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * Flat key = value configuration: the file format every tool consumes and
 * the builders that turn parsed keys into library objects.
 *
 * Format: one `key = value` pair per line, `#` starts a comment, blank
 * lines ignored, later duplicates win. Lists are comma-separated numbers.
 *
 * Key blocks:
 *   alpha                          stability index (default 1.0)
 *   ref.kind                       log_power | power_law
 *   ref.theta                      profile exponent
 *   ref.lipschitz                  optional widening of the Lipschitz bound
 *   ref.g_monotone                 dec | inc (declared class override)
 *   region.dim                     ambient dimension (default 2)
 *   region.c_star                  horn characteristic scale (default 0.2)
 *   t0.c, t0.tau_max, t0.rel_tol   crossover-time solver knobs
 *   mc.n_paths, mc.step_h, mc.seed, mc.box_radius, mc.parallelism
 *   t_grid                         sweep times (verify)
 *   pair.N.x, pair.N.y             sweep point pairs, N = 0,1,... (verify)
 *   mode                           kernel | survival (verify)
 *   survival.c2                    survival-bound rate (verify/survival)
 *
 * Envelope constants live in their own file (the --consts flag) under the
 * bare EnvelopeConstants field names: c_short, c_long, kappa_low, kappa_up,
 * a_low, a_up, j_inner_scale, j_time_scale, j_rate, j_tail_rate.
 */

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hornheat/envelopes.hpp"
#include "hornheat/errors.hpp"
#include "hornheat/geometry.hpp"
#include "hornheat/harness.hpp"
#include "hornheat/params.hpp"
#include "hornheat/reference.hpp"
#include "hornheat/simulate.hpp"

namespace hornheat {

namespace detail {

[[nodiscard]] inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[nodiscard]] inline double parse_double(const std::string& key,
                                         const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: key '" + key + "' has non-numeric value '" +
                       v + "'");
  }
}

template <class Int>
[[nodiscard]] Int parse_int(const std::string& key, const std::string& v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw config_error("config: key '" + key + "' has non-integer value '" +
                       v + "'");
  return x;
}

}  // namespace detail

class KeyValues {
 public:
  KeyValues() = default;

  static KeyValues parse_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw config_error("config: line " + std::to_string(lineno) +
                           " is not 'key = value'");
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string val = detail::trim(line.substr(eq + 1));
      if (key.empty())
        throw config_error("config: empty key on line " +
                           std::to_string(lineno));
      kv.items_[key] = val;
    }
    return kv;
  }

  static KeyValues parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
  }

  [[nodiscard]] bool has(const std::string& key) const {
    return items_.count(key) != 0;
  }

  /// Sets or overrides one key (how CLI flags take precedence over files).
  void set(const std::string& key, const std::string& value) {
    items_[key] = value;
  }

  [[nodiscard]] const std::string& get_string(const std::string& key) const {
    const auto it = items_.find(key);
    if (it == items_.end())
      throw config_error("config: missing required key '" + key + "'");
    return it->second;
  }

  [[nodiscard]] std::string get_string(const std::string& key,
                                       const std::string& fallback) const {
    const auto it = items_.find(key);
    return it == items_.end() ? fallback : it->second;
  }

  [[nodiscard]] double get_double(const std::string& key) const {
    return detail::parse_double(key, get_string(key));
  }

  [[nodiscard]] double get_double(const std::string& key,
                                  double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  [[nodiscard]] long long get_int(const std::string& key) const {
    return detail::parse_int<long long>(key, get_string(key));
  }

  [[nodiscard]] long long get_int(const std::string& key,
                                  long long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  [[nodiscard]] std::uint64_t get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    return detail::parse_int<std::uint64_t>(key, get_string(key));
  }

  /// Comma-separated list of doubles; throws on empty or malformed entries.
  [[nodiscard]] std::vector<double> get_list(const std::string& key) const {
    const std::string& raw = get_string(key);
    std::vector<double> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ',')) {
      item = detail::trim(item);
      if (item.empty())
        throw config_error("config: empty element in list '" + key + "'");
      out.push_back(detail::parse_double(key, item));
    }
    if (out.empty())
      throw config_error("config: list '" + key + "' is empty");
    return out;
  }

  [[nodiscard]] const std::map<std::string, std::string>& items() const {
    return items_;
  }

 private:
  std::map<std::string, std::string> items_;
};

// ==== builders ====

[[nodiscard]] inline ReferenceFunction make_reference(const KeyValues& kv) {
  const double alpha = kv.get_double("alpha", 1.0);
  const std::string kind = kv.get_string("ref.kind");
  const double theta = kv.get_double("ref.theta");
  ReferenceFunction ref = [&] {
    const bool has_class = kv.has("ref.g_monotone");
    GMonotone declared = GMonotone::NonIncreasing;
    if (has_class) {
      const std::string cls = kv.get_string("ref.g_monotone");
      if (cls == "dec")
        declared = GMonotone::NonIncreasing;
      else if (cls == "inc")
        declared = GMonotone::NonDecreasing;
      else
        throw config_error("config: ref.g_monotone must be 'dec' or 'inc'");
    }
    if (kind == "log_power")
      return has_class ? ReferenceFunction::log_power(theta, alpha, declared)
                       : ReferenceFunction::log_power(theta, alpha);
    if (kind == "power_law")
      return has_class ? ReferenceFunction::power_law(theta, alpha, declared)
                       : ReferenceFunction::power_law(theta, alpha);
    throw config_error(
        "config: ref.kind must be 'log_power' or 'power_law'");
  }();
  if (kv.has("ref.lipschitz"))
    ref.widen_lipschitz(kv.get_double("ref.lipschitz"));
  return ref;
}

[[nodiscard]] inline ProcessParams make_params(const KeyValues& kv) {
  ProcessParams p;
  p.d = static_cast<int>(kv.get_int("region.dim", 2));
  p.alpha = kv.get_double("alpha", 1.0);
  p.validate();
  return p;
}

[[nodiscard]] inline HornRegion make_region(const KeyValues& kv) {
  const ProcessParams p = make_params(kv);
  return HornRegion(p.d, make_reference(kv),
                    kv.get_double("region.c_star", 0.2));
}

[[nodiscard]] inline T0Config make_t0(const KeyValues& kv) {
  T0Config cfg;
  cfg.c = kv.get_double("t0.c", cfg.c);
  cfg.tau_max = kv.get_double("t0.tau_max", cfg.tau_max);
  cfg.rel_tol = kv.get_double("t0.rel_tol", cfg.rel_tol);
  return cfg;
}

[[nodiscard]] inline MCConfig make_mc(const KeyValues& kv) {
  MCConfig cfg;
  cfg.n_paths = kv.get_int("mc.n_paths", cfg.n_paths);
  cfg.step_h = kv.get_double("mc.step_h", cfg.step_h);
  cfg.seed = kv.get_u64("mc.seed", cfg.seed);
  cfg.box_radius = kv.get_double("mc.box_radius", cfg.box_radius);
  cfg.parallelism =
      static_cast<int>(kv.get_int("mc.parallelism", cfg.parallelism));
  cfg.validate();
  return cfg;
}

/// Envelope constants from BARE field names (the --consts file format).
[[nodiscard]] inline EnvelopeConstants make_consts(const KeyValues& kv) {
  EnvelopeConstants c;
  c.c_short = kv.get_double("c_short", c.c_short);
  c.c_long = kv.get_double("c_long", c.c_long);
  c.kappa_low = kv.get_double("kappa_low", c.kappa_low);
  c.kappa_up = kv.get_double("kappa_up", c.kappa_up);
  c.a_low = kv.get_double("a_low", c.a_low);
  c.a_up = kv.get_double("a_up", c.a_up);
  c.j_inner_scale = kv.get_double("j_inner_scale", c.j_inner_scale);
  c.j_time_scale = kv.get_double("j_time_scale", c.j_time_scale);
  c.j_rate = kv.get_double("j_rate", c.j_rate);
  c.j_tail_rate = kv.get_double("j_tail_rate", c.j_tail_rate);
  c.validate();
  return c;
}

/// Sweep description for `verify`: t_grid plus pair.N.x / pair.N.y blocks.
[[nodiscard]] inline SweepSpec make_sweep_spec(const KeyValues& kv,
                                               const EnvelopeConstants& consts,
                                               int d) {
  SweepSpec spec;
  spec.t_grid = kv.get_list("t_grid");
  for (long long n = 0;; ++n) {
    const std::string xkey = "pair." + std::to_string(n) + ".x";
    const std::string ykey = "pair." + std::to_string(n) + ".y";
    if (!kv.has(xkey)) break;
    PointPair pr{kv.get_list(xkey), kv.get_list(ykey)};
    if (pr.x.size() != static_cast<std::size_t>(d) ||
        pr.y.size() != static_cast<std::size_t>(d))
      throw config_error("config: " + xkey + "/" + ykey + " must have " +
                         std::to_string(d) + " coordinates");
    spec.point_pairs.push_back(std::move(pr));
  }
  if (spec.point_pairs.empty())
    throw config_error("config: no pair.N.x/pair.N.y blocks found");
  spec.mc = make_mc(kv);
  spec.consts = consts;
  return spec;
}

}  // namespace hornheat
