#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uavrl/env.hpp"
#include "uavrl/io.hpp"
#include "uavrl/trainer.hpp"

namespace uavrl::harness {

inline constexpr const char* kCodeVersion = "0.1.0";

// Name of the env var holding a colon-separated config search path.
inline constexpr const char* kConfigPathVar = "UAVRL_CONFIG_PATH";

struct ExperimentSpec {
  std::string preset = "custom";
  env::EnvConfig env;
  trainer::TrainConfig train;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path out_dir = "runs";
};

const std::vector<std::string>& preset_names();

// Builds the documented env+train bundle for a preset tag; throws listing the
// valid names on an unknown tag.
ExperimentSpec make_preset(const std::string& name);

// Resolves a config file name against the CWD and UAVRL_CONFIG_PATH entries.
std::filesystem::path resolve_config(const std::string& name);

// Trains every seed, writing per-seed run dirs (manifest.ini, metrics.csv,
// eval.csv, checkpoints) plus a merged comparison.csv. Returns the run dirs.
std::vector<std::filesystem::path> cli_run(const ExperimentSpec& spec);

// Aligns the runs to the shortest episode count and writes a long-format CSV
// plus per-algorithm summary stats (final-500 mean/variance, timeout rate).
void cli_compare(const std::vector<std::filesystem::path>& run_dirs,
                 const std::filesystem::path& out_dir);

// Seeded uniform scenario generation, serialized as [env]/[radio] sections.
void cli_scenario(int n, int m, double area_m, std::uint64_t seed,
                  const std::filesystem::path& out_file);

// Greedy rollout from a finished run's checkpoints; writes a per-step trace CSV.
void cli_eval(const std::filesystem::path& run_dir, std::uint64_t seed,
              const std::filesystem::path& out_file);

}  // namespace uavrl::harness
