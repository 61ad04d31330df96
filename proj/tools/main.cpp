#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ifpopt/builtins.hpp"
#include "ifpopt/config.hpp"

namespace {

using namespace ifpopt;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts "0.35", "0.35+0.1*cos(t)", "0.3-0.05*sin(2.0*t)" and the like.
GainProfile parse_gain_expr(std::string expr) {
  std::string s;
  for (char c : expr) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  GainProfile p;
  size_t split = std::string::npos;
  for (size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s.find('*', i) != std::string::npos) {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    p.offset = std::stod(s);
    return p;
  }
  p.offset = std::stod(s.substr(0, split));
  std::string rest = s.substr(split);  // keeps the sign
  const size_t star = rest.find('*');
  p.amplitude = std::stod(rest.substr(0, star));
  std::string wave = rest.substr(star + 1);
  if (wave.rfind("sin(", 0) == 0) {
    p.wave = GainProfile::Wave::sin;
  } else if (wave.rfind("cos(", 0) == 0) {
    p.wave = GainProfile::Wave::cos;
  } else {
    throw ValidationError("cannot parse gain expression '" + expr + "'");
  }
  std::string arg = wave.substr(4, wave.size() - 5);  // inside (...)
  if (arg == "t") {
    p.omega = 1.0;
  } else {
    const size_t st = arg.find("*t");
    if (st == std::string::npos) throw ValidationError("gain expression argument must be w*t");
    p.omega = std::stod(arg.substr(0, st));
  }
  return p;
}

struct CommonOpts {
  std::string config_path;
  std::string builtin;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::string override_gain;
  bool allow_inadmissible = false;
};

ExperimentConfig load_config(const CommonOpts& opts) {
  if (opts.builtin.empty() == opts.config_path.empty()) {
    throw ValidationError("exactly one of --config or --builtin is required");
  }
  ExperimentConfig cfg = opts.builtin.empty() ? config_from_json_text(read_file(opts.config_path))
                                              : builtin_config(opts.builtin);
  if (opts.seed) {
    if (cfg.schedule && cfg.schedule->sequence_kind == "random") cfg.schedule->seed = *opts.seed;
    if (cfg.init.x_uniform) cfg.init.x_seed = *opts.seed + 1;
  }
  if (opts.dt) cfg.sim.dt = *opts.dt;
  if (opts.t_end) cfg.sim.t_end = *opts.t_end;
  if (!opts.override_gain.empty()) {
    cfg.gains.kind = "shared";
    cfg.gains.shared = parse_gain_expr(opts.override_gain);
    cfg.gains.profiles.clear();
  }
  if (opts.allow_inadmissible) cfg.allow_inadmissible_gain = true;
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "path to a JSON experiment config");
  cmd->add_option("-b,--builtin", opts.builtin, "name of a bundled experiment");
  cmd->add_option("--seed", opts.seed, "override the schedule seed (init seed becomes seed+1)");
  cmd->add_option("--dt", opts.dt, "override the integration step");
  cmd->add_option("--t-end", opts.t_end, "override the simulation end time");
  cmd->add_option("--override-gain", opts.override_gain,
                  "replace the gain spec, e.g. '0.005' or '0.35+0.1*cos(t)'");
  cmd->add_flag("--allow-inadmissible-gain", opts.allow_inadmissible,
                "simulate even when the gain violates the degree threshold");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time distributed optimization over switching balanced digraphs"};
  app.require_subcommand(1);

  CommonOpts run_opts, analyze_opts;
  auto* run_cmd = app.add_subcommand("run", "validate, simulate and write CSV/JSON artifacts");
  add_common(run_cmd, run_opts);
  run_cmd->add_option("-o,--out", run_opts.out_dir, "output directory (default out/<name>)");

  auto* analyze_cmd =
      app.add_subcommand("analyze", "indices, thresholds and graph verdicts, no simulation");
  add_common(analyze_cmd, analyze_opts);

  auto* list_cmd = app.add_subcommand("list-builtins", "list bundled experiments");
  auto* schema_cmd = app.add_subcommand("export-schema", "print the config schema as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& name : builtin_names()) {
        std::cout << name << "  -  " << builtin_description(name) << "\n";
      }
      return 0;
    }
    if (schema_cmd->parsed()) {
      std::cout << schema_json() << "\n";
      return 0;
    }
    if (analyze_cmd->parsed()) {
      const ResolvedExperiment exp = resolve(load_config(analyze_opts));
      std::cout << analyze_experiment(exp) << "\n";
      return 0;
    }
    // run
    ExperimentConfig cfg = load_config(run_opts);
    std::string out = run_opts.out_dir.empty() ? "out/" + cfg.name : run_opts.out_dir;
    const ResolvedExperiment exp = resolve(cfg);
    const RunArtifacts art = run_experiment(exp, out);
    std::cout << art.summary_json << "\n";
    std::cerr << "artifacts written to " << out << "\n";
    return art.exit_code;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
