#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavrl/harness.hpp"
#include "uavrl/io.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoull(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

uavrl::io::KvFile overrides_to_kv(const std::vector<std::string>& sets) {
  uavrl::io::KvFile kv;
  for (const std::string& s : sets) {
    std::size_t eq = s.find('=');
    std::size_t dot = s.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw std::invalid_argument("--set wants section.key=value, got '" + s + "'");
    kv.set(s.substr(0, dot), s.substr(dot + 1, eq - dot - 1), s.substr(eq + 1));
  }
  return kv;
}

const std::vector<std::string> kAllSections = {
    "run", "env", "radio", "train", "ppo_discrete", "ppo_continuous", "dqn"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV uplink data-collection RL harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Train agents and write run artifacts");
  std::string preset = "custom";
  std::string algo = "ppo-ppo";
  std::string scenario_file;
  std::string config_file;
  std::string seeds_str = "1";
  std::string run_out = "runs";
  int episodes = -1;
  std::vector<std::string> sets;
  run->add_option("--preset", preset, "experiment preset tag")->capture_default_str();
  run->add_option("--algo", algo, "ppo-ppo | dqn-ppo | dueling-dqn-ppo")
      ->capture_default_str();
  run->add_option("--scenario", scenario_file, "scenario file ([env]/[radio] sections)");
  run->add_option("--config", config_file, "config or manifest file (any sections)");
  run->add_option("--seeds", seeds_str, "comma-separated seed list")->capture_default_str();
  run->add_option("--episodes", episodes, "override the preset episode budget");
  run->add_option("--out", run_out, "output directory")->capture_default_str();
  run->add_option("--set", sets, "section.key=value override (repeatable)");

  auto* compare = app.add_subcommand("compare", "Summarize finished runs");
  std::vector<std::string> compare_dirs;
  std::string compare_out = "compare";
  compare->add_option("runs", compare_dirs, "run directories")->required();
  compare->add_option("--out", compare_out, "output directory")->capture_default_str();

  auto* scenario = app.add_subcommand("scenario", "Generate a random scenario file");
  int sc_n = 5;
  int sc_m = 3;
  double sc_area = 200.0;
  std::uint64_t sc_seed = 1;
  std::string sc_out = "scenario.ini";
  scenario->add_option("--n", sc_n, "number of MDCs")->capture_default_str();
  scenario->add_option("--m", sc_m, "number of channels")->capture_default_str();
  scenario->add_option("--area", sc_area, "region side length L (m)")->capture_default_str();
  scenario->add_option("--seed", sc_seed, "placement seed")->capture_default_str();
  scenario->add_option("--out", sc_out, "output file")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Greedy rollout from a run's checkpoints");
  std::string eval_run;
  std::uint64_t eval_seed = 1;
  std::string eval_out = "trace.csv";
  eval->add_option("--run", eval_run, "run directory with manifest + checkpoints")
      ->required();
  eval->add_option("--seed", eval_seed, "episode seed")->capture_default_str();
  eval->add_option("--out", eval_out, "trace CSV path")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      uavrl::harness::ExperimentSpec spec = uavrl::harness::make_preset(preset);
      if (!scenario_file.empty()) {
        uavrl::io::KvFile kv =
            uavrl::io::KvFile::load(uavrl::harness::resolve_config(scenario_file));
        uavrl::io::check_known_sections(kv, {"env", "radio"});
        spec.env = uavrl::io::env_from_kv(kv, spec.env);
      }
      if (!config_file.empty()) {
        uavrl::io::KvFile kv =
            uavrl::io::KvFile::load(uavrl::harness::resolve_config(config_file));
        uavrl::io::check_known_sections(kv, kAllSections);
        spec.env = uavrl::io::env_from_kv(kv, spec.env);
        spec.train = uavrl::io::train_from_kv(kv, spec.train);
      }
      if (!sets.empty()) {
        uavrl::io::KvFile kv = overrides_to_kv(sets);
        uavrl::io::check_known_sections(kv, kAllSections);
        spec.env = uavrl::io::env_from_kv(kv, spec.env);
        spec.train = uavrl::io::train_from_kv(kv, spec.train);
      }
      spec.train.algo = uavrl::trainer::algo_from_name(algo);
      if (episodes >= 0) spec.train.episodes = episodes;
      spec.seeds = parse_seeds(seeds_str);
      spec.out_dir = run_out;
      uavrl::harness::cli_run(spec);
    } else if (*compare) {
      std::vector<std::filesystem::path> dirs(compare_dirs.begin(), compare_dirs.end());
      uavrl::harness::cli_compare(dirs, compare_out);
    } else if (*scenario) {
      uavrl::harness::cli_scenario(sc_n, sc_m, sc_area, sc_seed, sc_out);
    } else if (*eval) {
      uavrl::harness::cli_eval(eval_run, eval_seed, eval_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
