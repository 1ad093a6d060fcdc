#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "uavrl/env.hpp"
#include "uavrl/trainer.hpp"

namespace uavrl::io {

// --- INI-style key/value files ----------------------------------------------
// Sections and keys keep insertion order so emitted files are stable.

struct KvSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;
};

struct KvFile {
  std::vector<KvSection> sections;

  const std::string* find(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  const KvSection* find_section(const std::string& section) const;

  static KvFile parse(std::istream& in);        // throws on malformed/duplicate lines
  static KvFile load(const std::filesystem::path& p);
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& p) const;
};

// Typed value parsing; errors carry the offending key for diagnostics.
double parse_double(const std::string& key, const std::string& value);
std::int64_t parse_int(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);
std::vector<int> parse_int_list(const std::string& key, const std::string& value);
std::vector<Eigen::Vector2d> parse_positions(const std::string& key,
                                             const std::string& value);

std::string format_double(double v);  // round-trip exact
std::string format_int_list(const std::vector<int>& v);
std::string format_positions(const std::vector<Eigen::Vector2d>& v);

// --- config (de)serialization -------------------------------------------------
// Loaders apply keys over the passed-in defaults and reject unknown keys by
// name; absent keys keep their defaults.

void env_to_kv(const env::EnvConfig& cfg, KvFile& kv);  // fills [env] and [radio]
env::EnvConfig env_from_kv(const KvFile& kv, env::EnvConfig defaults = {});

void train_to_kv(const trainer::TrainConfig& cfg, KvFile& kv);
trainer::TrainConfig train_from_kv(const KvFile& kv, trainer::TrainConfig defaults = {});

// Full-file validation for scenario/manifest files: every section must be one
// of the recognized ones and every key must be consumed by a loader.
void check_known_sections(const KvFile& kv, const std::vector<std::string>& allowed);

// --- CSV ----------------------------------------------------------------------

void write_metrics_csv(std::ostream& out, const std::vector<trainer::MetricsRow>& rows);
std::vector<trainer::MetricsRow> read_metrics_csv(std::istream& in);

void write_eval_csv(std::ostream& out, const std::vector<trainer::EvalRow>& rows);
std::vector<trainer::EvalRow> read_eval_csv(std::istream& in);

// Generic row access used by the comparison tooling.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace uavrl::io
