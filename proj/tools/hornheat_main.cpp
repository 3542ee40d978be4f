// SPDX-License-Identifier: Apache-2.0
//
// hornheat: heat-kernel envelopes, regime classification, and Monte Carlo
// verification for the symmetric stable process killed on a horn region.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 solver/numerical
// error. All numeric output is %.17e scientific notation.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hornheat/hornheat.hpp"

namespace {

using hornheat::format_scientific;
using hornheat::KeyValues;

std::vector<double> parse_point(const std::string& csv, int d,
                                const char* name) {
  KeyValues tmp;
  tmp.set(name, csv);
  auto v = tmp.get_list(name);
  if (v.size() != static_cast<std::size_t>(d))
    throw hornheat::config_error(std::string("flag --") + name + " needs " +
                                 std::to_string(d) + " coordinates");
  return v;
}

/// The configuration layers shared by every subcommand: an optional config
/// file, then flag overrides written on top of it.
struct CommonOpts {
  std::string config_path;
  std::string consts_path;
  std::string ref_kind;
  std::string g_monotone;
  double theta = 0.0;
  double alpha = 0.0;
  double lipschitz = 0.0;
  double c_star = 0.0;
  long long dim = 0;
  double t0_c = 0.0;
  double t0_tau_max = 0.0;
  double t0_rel_tol = 0.0;

  CLI::App* sub = nullptr;

  void attach(CLI::App* s) {
    sub = s;
    s->add_option("--config", config_path, "flat key = value config file");
    s->add_option("--consts", consts_path,
                  "envelope-constants file (bare field names)");
    s->add_option("--ref-kind", ref_kind, "log_power | power_law");
    s->add_option("--theta", theta, "profile exponent");
    s->add_option("--alpha", alpha, "stability index in (0,2)");
    s->add_option("--g-monotone", g_monotone, "declared g class: dec | inc");
    s->add_option("--lipschitz", lipschitz, "widen the Lipschitz bound");
    s->add_option("--dim", dim, "ambient dimension (>= 2)");
    s->add_option("--c-star", c_star, "horn characteristic scale");
    s->add_option("--t0-c", t0_c, "crossover-equation rate constant");
    s->add_option("--t0-tau-max", t0_tau_max, "crossover solver bracket cap");
    s->add_option("--t0-rel-tol", t0_rel_tol, "crossover solver tolerance");
  }

  /// Writes explicitly-passed flags over kv, then fills the profile
  /// fallback (power_law, theta = 1) for keys still missing, so every tool
  /// runs out of the box.
  void apply_flags(KeyValues& kv) const {
    const auto override_if = [&](const char* key, const char* flag,
                                 const std::string& val) {
      if (sub->count(flag) > 0) kv.set(key, val);
    };
    override_if("ref.kind", "--ref-kind", ref_kind);
    override_if("ref.theta", "--theta", format_scientific(theta));
    override_if("alpha", "--alpha", format_scientific(alpha));
    override_if("ref.g_monotone", "--g-monotone", g_monotone);
    override_if("ref.lipschitz", "--lipschitz", format_scientific(lipschitz));
    override_if("region.dim", "--dim", std::to_string(dim));
    override_if("region.c_star", "--c-star", format_scientific(c_star));
    override_if("t0.c", "--t0-c", format_scientific(t0_c));
    override_if("t0.tau_max", "--t0-tau-max", format_scientific(t0_tau_max));
    override_if("t0.rel_tol", "--t0-rel-tol", format_scientific(t0_rel_tol));
    if (!kv.has("ref.kind")) kv.set("ref.kind", "power_law");
    if (!kv.has("ref.theta")) kv.set("ref.theta", "1.0");
  }

  /// Config file plus flag overrides.
  [[nodiscard]] KeyValues merged() const {
    KeyValues kv = config_path.empty() ? KeyValues{}
                                       : KeyValues::parse_file(config_path);
    apply_flags(kv);
    return kv;
  }

  [[nodiscard]] hornheat::EnvelopeConstants consts() const {
    if (consts_path.empty()) return {};
    return hornheat::make_consts(KeyValues::parse_file(consts_path));
  }
};

struct McOpts {
  long long paths = 0;
  double step = 0.0;
  long long seed = -1;
  double box_radius = 0.0;
  long long threads = 0;

  CLI::App* sub = nullptr;

  void attach(CLI::App* s) {
    sub = s;
    s->add_option("--paths", paths, "number of Monte Carlo paths");
    s->add_option("--step", step, "time step of the jump chain");
    s->add_option("--seed", seed, "RNG seed");
    s->add_option("--box-radius", box_radius, "density estimator radius");
    s->add_option("--threads", threads, "worker threads (0 = auto)");
  }

  void merge_into(KeyValues& kv) const {
    if (sub->count("--paths")) kv.set("mc.n_paths", std::to_string(paths));
    if (sub->count("--step")) kv.set("mc.step_h", format_scientific(step));
    if (sub->count("--seed")) kv.set("mc.seed", std::to_string(seed));
    if (sub->count("--box-radius"))
      kv.set("mc.box_radius", format_scientific(box_radius));
    if (sub->count("--threads"))
      kv.set("mc.parallelism", std::to_string(threads));
  }
};

void print_point_header(std::string& out, const char* stem, int d) {
  for (int i = 0; i < d; ++i)
    out += std::string(",") + stem + std::to_string(i);
}

void print_point_row(std::string& out, const std::vector<double>& v) {
  for (double c : v) out += "," + format_scientific(c);
}

int run(int argc, char** argv) {
  CLI::App app{
      "heat-kernel envelopes and Monte Carlo verification on horn regions"};
  app.require_subcommand(1);

  // ---- envelope / regime ----
  CommonOpts env_common, reg_common;
  double env_t = 0.0, reg_t = 0.0;
  std::string env_x, env_y, reg_x, reg_y;
  CLI::App* c_env = app.add_subcommand(
      "envelope", "two-sided kernel envelope at one (t, x, y)");
  env_common.attach(c_env);
  c_env->add_option("--t", env_t, "time")->required();
  c_env->add_option("--x", env_x, "start point, comma list")->required();
  c_env->add_option("--y", env_y, "end point, comma list")->required();

  CLI::App* c_reg =
      app.add_subcommand("regime", "time-regime label at one (t, x, y)");
  reg_common.attach(c_reg);
  c_reg->add_option("--t", reg_t, "time")->required();
  c_reg->add_option("--x", reg_x, "start point, comma list")->required();
  c_reg->add_option("--y", reg_y, "end point, comma list")->required();

  // ---- survival-bound ----
  CommonOpts sb_common;
  double sb_t = 0.0, sb_c2 = 1.0;
  std::string sb_x;
  CLI::App* c_sb = app.add_subcommand(
      "survival-bound", "survival upper bound at one (t, x)");
  sb_common.attach(c_sb);
  c_sb->add_option("--t", sb_t, "time")->required();
  c_sb->add_option("--x", sb_x, "point, comma list")->required();
  c_sb->add_option("--c2", sb_c2, "exponential rate (default 1)");

  // ---- iu-constant ----
  CommonOpts iu_common;
  double iu_t = 0.0, iu_cutoff = 1.0;
  CLI::App* c_iu = app.add_subcommand(
      "iu-constant", "intrinsic-ultracontractivity coupling constant");
  iu_common.attach(c_iu);
  c_iu->add_option("--t", iu_t, "time")->required();
  c_iu->add_option("--cutoff", iu_cutoff, "small/large-t split (default 1)");

  // ---- example-table ----
  CommonOpts ex_common;
  double ex_t = 0.0;
  std::string ex_x, ex_y;
  hornheat::LogPowerCutoffs ex_cuts;
  CLI::App* c_ex = app.add_subcommand(
      "example-table", "closed-form log-power comparability table");
  ex_common.attach(c_ex);
  c_ex->add_option("--t", ex_t, "time")->required();
  c_ex->add_option("--x", ex_x, "start point, comma list")->required();
  c_ex->add_option("--y", ex_y, "end point, comma list")->required();
  c_ex->add_option("--b1", ex_cuts.b1, "branch cutoff multiplier");
  c_ex->add_option("--b2", ex_cuts.b2, "branch cutoff multiplier");
  c_ex->add_option("--b3", ex_cuts.b3, "branch cutoff multiplier");
  c_ex->add_option("--b4", ex_cuts.b4, "branch cutoff multiplier");
  c_ex->add_option("--b5", ex_cuts.b5, "branch cutoff multiplier");

  // ---- simulate ----
  CommonOpts sim_common;
  McOpts sim_mc;
  std::string sim_mode, sim_x, sim_y;
  double sim_t = 0.0;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Monte Carlo estimator on the configured horn region");
  sim_common.attach(c_sim);
  sim_mc.attach(c_sim);
  c_sim
      ->add_option("--mode", sim_mode,
                   "survival | kernel | exit-time | intensity")
      ->required();
  c_sim->add_option("--t", sim_t, "horizon (survival/kernel/exit-time)");
  c_sim->add_option("--x", sim_x, "start point, comma list")->required();
  c_sim->add_option("--y", sim_y, "target point (kernel mode)");

  // ---- verify ----
  CommonOpts ver_common;
  McOpts ver_mc;
  std::string ver_spec, ver_out = ".";
  CLI::App* c_ver = app.add_subcommand(
      "verify", "sweep the envelopes against Monte Carlo; write reports");
  ver_common.attach(c_ver);
  ver_mc.attach(c_ver);
  c_ver->add_option("--spec", ver_spec, "sweep spec file")->required();
  c_ver->add_option("--out-dir", ver_out,
                    "directory for report.csv and summary.txt");

  // ---- demo-varopoulos ----
  CommonOpts var_common;
  double var_t = 2.0, var_c2 = 1.0;
  std::string var_mags = "10,31.6227766,100,316.227766,1000";
  CLI::App* c_var = app.add_subcommand(
      "demo-varopoulos",
      "analytic failure of product-form lower bounds at large |y|");
  var_common.attach(c_var);
  c_var->add_option("--t", var_t, "fixed time (default 2)");
  c_var->add_option("--y-mags", var_mags, "comma list of |y| magnitudes");
  c_var->add_option("--c2", var_c2, "survival-bound rate (default 1)");

  // ---- asymptotics ----
  CommonOpts asy_common;
  CLI::App* c_asy = app.add_subcommand(
      "asymptotics", "slow-scale ratio-window checks for the profile");
  asy_common.attach(c_asy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (c_env->parsed() || c_reg->parsed()) {
    const bool is_env = c_env->parsed();
    const CommonOpts& common = is_env ? env_common : reg_common;
    const KeyValues kv = common.merged();
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::HornRegion region = hornheat::make_region(kv);
    const hornheat::T0Config t0cfg = hornheat::make_t0(kv);
    const auto x = parse_point(is_env ? env_x : reg_x, p.d, "x");
    const auto y = parse_point(is_env ? env_y : reg_y, p.d, "y");
    const double t = is_env ? env_t : reg_t;
    if (!is_env) {
      std::cout << to_string(hornheat::classify(region, p, common.consts(), t,
                                                x, y, t0cfg))
                << "\n";
      return 0;
    }
    const hornheat::LogEnvelope env =
        hornheat::envelope(region, p, common.consts(), t, x, y, t0cfg);
    std::string out = "t";
    print_point_header(out, "x", p.d);
    print_point_header(out, "y", p.d);
    out += ",regime,log_lower,log_upper\n" + format_scientific(t);
    print_point_row(out, x);
    print_point_row(out, y);
    out += std::string(",") + to_string(env.regime) + "," +
           format_scientific(env.log_lower) + "," +
           format_scientific(env.log_upper) + "\n";
    std::cout << out;
    return 0;
  }

  if (c_sb->parsed()) {
    const KeyValues kv = sb_common.merged();
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::HornRegion region = hornheat::make_region(kv);
    const auto x = parse_point(sb_x, p.d, "x");
    const double lu = hornheat::survival_upper_log(region, p, sb_t, x, sb_c2);
    std::string out = "t";
    print_point_header(out, "x", p.d);
    out += ",c2,log_upper\n" + format_scientific(sb_t);
    print_point_row(out, x);
    out += "," + format_scientific(sb_c2) + "," + format_scientific(lu) + "\n";
    std::cout << out;
    return 0;
  }

  if (c_iu->parsed()) {
    const KeyValues kv = iu_common.merged();
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::ReferenceFunction ref = hornheat::make_reference(kv);
    const double v = hornheat::iu_constant_log(ref, p, iu_t, iu_cutoff,
                                               iu_common.consts());
    std::cout << "t,cutoff,log_value\n"
              << format_scientific(iu_t) << ","
              << format_scientific(iu_cutoff) << "," << format_scientific(v)
              << "\n";
    return 0;
  }

  if (c_ex->parsed()) {
    const KeyValues kv = ex_common.merged();
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::HornRegion region = hornheat::make_region(kv);
    const auto x = parse_point(ex_x, p.d, "x");
    const auto y = parse_point(ex_y, p.d, "y");
    const hornheat::LogPowerBranch b =
        hornheat::example_log_power_table_log(region, p, ex_t, x, y, ex_cuts);
    std::string out = "t";
    print_point_header(out, "x", p.d);
    print_point_header(out, "y", p.d);
    out += ",branch,log_value,exp_arg\n" + format_scientific(ex_t);
    print_point_row(out, x);
    print_point_row(out, y);
    out += "," + std::to_string(b.branch) + "," +
           format_scientific(b.log_value) + "," + format_scientific(b.exp_arg) +
           "\n";
    std::cout << out;
    return 0;
  }

  if (c_sim->parsed()) {
    KeyValues kv = sim_common.merged();
    sim_mc.merge_into(kv);
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::HornRegion region = hornheat::make_region(kv);
    const hornheat::MCConfig mc = hornheat::make_mc(kv);
    const auto x = parse_point(sim_x, p.d, "x");
    const bool needs_t = sim_mode != "intensity";
    if (needs_t && c_sim->count("--t") == 0)
      throw hornheat::config_error("simulate: --t is required for mode " +
                                   sim_mode);
    hornheat::MCResult r{};
    std::string header = "mode,t";
    std::string row = sim_mode + "," +
                      format_scientific(needs_t ? sim_t : 0.0);
    print_point_header(header, "x", p.d);
    print_point_row(row, x);
    if (sim_mode == "survival") {
      r = hornheat::survival_mc(region, p, x, sim_t, mc);
    } else if (sim_mode == "exit-time") {
      r = hornheat::exit_time_mc(region, p, x, sim_t, mc);
    } else if (sim_mode == "kernel") {
      if (c_sim->count("--y") == 0)
        throw hornheat::config_error("simulate: kernel mode needs --y");
      const auto y = parse_point(sim_y, p.d, "y");
      print_point_header(header, "y", p.d);
      print_point_row(row, y);
      header += ",box_radius";
      row += "," + format_scientific(mc.box_radius);
      r = hornheat::kernel_mc(region, p, x, y, sim_t, mc);
    } else if (sim_mode == "intensity") {
      r = hornheat::complement_intensity_mc(region, p, x, mc.n_paths,
                                            mc.seed);
    } else {
      throw hornheat::config_error("simulate: unknown mode '" + sim_mode +
                                   "'");
    }
    header += ",n_paths,step_h,seed,estimate,std_error,n_effective\n";
    row += "," + std::to_string(mc.n_paths) + "," +
           format_scientific(mc.step_h) + "," + std::to_string(mc.seed) +
           "," + format_scientific(r.estimate) + "," +
           format_scientific(r.std_error) + "," +
           std::to_string(r.n_effective) + "\n";
    std::cout << header << row;
    return 0;
  }

  if (c_ver->parsed()) {
    // Precedence: spec file < --config file < explicit flags.
    KeyValues kv = KeyValues::parse_file(ver_spec);
    if (!ver_common.config_path.empty())
      for (const auto& [k, v] :
           KeyValues::parse_file(ver_common.config_path).items())
        kv.set(k, v);
    ver_common.apply_flags(kv);
    ver_mc.merge_into(kv);
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::ReferenceFunction ref = hornheat::make_reference(kv);
    const hornheat::HornRegion region = hornheat::make_region(kv);
    const hornheat::T0Config t0cfg = hornheat::make_t0(kv);
    hornheat::EnvelopeConstants consts = ver_common.consts();
    const hornheat::SweepSpec spec =
        hornheat::make_sweep_spec(kv, consts, p.d);
    const std::string mode = kv.get_string("mode", "kernel");
    hornheat::VerificationReport rep;
    if (mode == "kernel") {
      rep = hornheat::sweep(region, ref, p, spec, t0cfg);
    } else if (mode == "survival") {
      rep = hornheat::survival_sweep(region, ref, p, spec,
                                     kv.get_double("survival.c2", 1.0),
                                     t0cfg);
    } else {
      throw hornheat::config_error("verify: mode must be kernel or survival");
    }
    std::filesystem::create_directories(ver_out);
    const auto csv_path = std::filesystem::path(ver_out) / "report.csv";
    const auto sum_path = std::filesystem::path(ver_out) / "summary.txt";
    std::ofstream(csv_path) << rep.to_csv();
    const std::string summary = rep.summary_text();
    std::ofstream(sum_path) << summary;
    std::cout << summary;
    return 0;
  }

  if (c_var->parsed()) {
    const KeyValues kv = var_common.merged();
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::ReferenceFunction ref = hornheat::make_reference(kv);
    const hornheat::HornRegion region = hornheat::make_region(kv);
    const hornheat::T0Config t0cfg = hornheat::make_t0(kv);
    KeyValues tmp;
    tmp.set("y_mags", var_mags);
    const auto mags = tmp.get_list("y_mags");
    const auto rows =
        hornheat::varopoulos_demo(region, ref, p, var_common.consts(), var_t,
                                  mags, var_c2, t0cfg);
    std::cout << hornheat::varopoulos_to_csv(rows);
    return 0;
  }

  if (c_asy->parsed()) {
    const KeyValues kv = asy_common.merged();
    const hornheat::ProcessParams p = hornheat::make_params(kv);
    const hornheat::ReferenceFunction ref = hornheat::make_reference(kv);
    std::cout << hornheat::asymptotics_suite(ref, p).to_text();
    return 0;
  }

  std::cerr << "no subcommand\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hornheat::solver_error& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const hornheat::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hornheat::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
}
