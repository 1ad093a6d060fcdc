#include "uavrl/io.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uavrl::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* want) {
  throw std::invalid_argument("config key '" + key + "': cannot parse '" + value +
                              "' as " + want);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Tracks which keys a loader consumed so leftovers can be rejected by name.
class SectionReader {
 public:
  SectionReader(const KvFile& kv, std::string section)
      : section_(std::move(section)), sec_(kv.find_section(section_)) {}

  bool get(const std::string& key, std::string& out) {
    seen_.insert(key);
    if (!sec_) return false;
    for (const auto& [k, v] : sec_->entries) {
      if (k == key) {
        out = v;
        return true;
      }
    }
    return false;
  }

  void get_double(const std::string& key, double& field) {
    std::string v;
    if (get(key, v)) field = parse_double(key, v);
  }

  void get_int(const std::string& key, int& field) {
    std::string v;
    if (get(key, v)) field = static_cast<int>(parse_int(key, v));
  }

  void get_u64(const std::string& key, std::uint64_t& field) {
    std::string v;
    if (get(key, v)) field = static_cast<std::uint64_t>(parse_int(key, v));
  }

  void get_bool(const std::string& key, bool& field) {
    std::string v;
    if (get(key, v)) field = parse_bool(key, v);
  }

  void get_int_list(const std::string& key, std::vector<int>& field) {
    std::string v;
    if (get(key, v)) field = parse_int_list(key, v);
  }

  // Call after all gets: any key not asked for is unknown.
  void reject_unknown() const {
    if (!sec_) return;
    for (const auto& [k, v] : sec_->entries) {
      if (!seen_.count(k))
        throw std::invalid_argument("unknown config key '" + section_ + "." + k + "'");
    }
  }

 private:
  std::string section_;
  const KvSection* sec_;
  std::set<std::string> seen_;
};

void ppo_to_section(const agents::PpoConfig& c, const std::string& section, KvFile& kv) {
  kv.set(section, "clip_ratio", format_double(c.clip_ratio));
  kv.set(section, "gamma", format_double(c.gamma));
  kv.set(section, "actor_lr", format_double(c.actor_lr));
  kv.set(section, "critic_lr", format_double(c.critic_lr));
  kv.set(section, "entropy_coef", format_double(c.entropy_coef));
  kv.set(section, "hidden", format_int_list(c.hidden));
  kv.set(section, "use_gae", c.use_gae ? "true" : "false");
  kv.set(section, "gae_lambda", format_double(c.gae_lambda));
  kv.set(section, "sigma_floor", format_double(c.sigma_floor));
  kv.set(section, "sigma_init", format_double(c.sigma_init));
}

agents::PpoConfig ppo_from_section(const KvFile& kv, const std::string& section,
                                   agents::PpoConfig c) {
  SectionReader r(kv, section);
  r.get_double("clip_ratio", c.clip_ratio);
  r.get_double("gamma", c.gamma);
  r.get_double("actor_lr", c.actor_lr);
  r.get_double("critic_lr", c.critic_lr);
  r.get_double("entropy_coef", c.entropy_coef);
  r.get_int_list("hidden", c.hidden);
  r.get_bool("use_gae", c.use_gae);
  r.get_double("gae_lambda", c.gae_lambda);
  r.get_double("sigma_floor", c.sigma_floor);
  r.get_double("sigma_init", c.sigma_init);
  r.reject_unknown();
  return c;
}

}  // namespace

// --- KvFile -------------------------------------------------------------------

const KvSection* KvFile::find_section(const std::string& section) const {
  for (const auto& s : sections)
    if (s.name == section) return &s;
  return nullptr;
}

const std::string* KvFile::find(const std::string& section, const std::string& key) const {
  const KvSection* s = find_section(section);
  if (!s) return nullptr;
  for (const auto& [k, v] : s->entries)
    if (k == key) return &v;
  return nullptr;
}

void KvFile::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  for (auto& s : sections) {
    if (s.name != section) continue;
    for (auto& [k, v] : s.entries) {
      if (k == key) {
        v = value;
        return;
      }
    }
    s.entries.emplace_back(key, value);
    return;
  }
  sections.push_back(KvSection{section, {{key, value}}});
}

KvFile KvFile::parse(std::istream& in) {
  KvFile kv;
  KvSection* cur = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      std::string name = trim(t.substr(1, t.size() - 2));
      if (kv.find_section(name))
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": duplicate section [" + name + "]");
      kv.sections.push_back(KvSection{name, {}});
      cur = &kv.sections.back();
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    if (!cur)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": key outside any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    for (const auto& [k, v] : cur->entries)
      if (k == key)
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": duplicate key '" + key + "'");
    cur->entries.emplace_back(key, value);
  }
  return kv;
}

KvFile KvFile::load(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open config file: " + p.string());
  return parse(in);
}

void KvFile::write(std::ostream& out) const {
  bool first = true;
  for (const auto& s : sections) {
    if (!first) out << "\n";
    first = false;
    out << "[" << s.name << "]\n";
    for (const auto& [k, v] : s.entries) out << k << " = " << v << "\n";
  }
}

void KvFile::save(const std::filesystem::path& p) const {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write config file: " + p.string());
  write(out);
}

// --- typed values ---------------------------------------------------------------

double parse_double(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  // strtod instead of stod: stod throws out_of_range on denormals, which are
  // perfectly representable and show up when round-tripping tiny values.
  errno = 0;
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || end != v.c_str() + v.size()) bad_value(key, value, "a number");
  if (errno == ERANGE && std::isinf(d)) bad_value(key, value, "a representable number");
  return d;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(key, value, "an integer");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  std::string v = trim(value);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, value, "a boolean (true/false)");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const std::string& part : split(value, ',')) {
    std::string t = trim(part);
    if (t.empty()) bad_value(key, value, "a comma-separated integer list");
    out.push_back(static_cast<int>(parse_int(key, t)));
  }
  return out;
}

std::vector<Eigen::Vector2d> parse_positions(const std::string& key,
                                             const std::string& value) {
  // format: (x1, y1), (x2, y2), ...
  std::vector<Eigen::Vector2d> out;
  std::size_t i = 0;
  const std::string& s = value;
  auto skip_ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  skip_ws();
  while (i < s.size()) {
    if (s[i] != '(') bad_value(key, value, "a (x, y) pair list");
    std::size_t close = s.find(')', i);
    if (close == std::string::npos) bad_value(key, value, "a (x, y) pair list");
    std::string inner = s.substr(i + 1, close - i - 1);
    std::vector<std::string> parts = split(inner, ',');
    if (parts.size() != 2) bad_value(key, value, "a (x, y) pair list");
    out.emplace_back(parse_double(key, trim(parts[0])), parse_double(key, trim(parts[1])));
    i = close + 1;
    skip_ws();
    if (i < s.size()) {
      if (s[i] != ',') bad_value(key, value, "a (x, y) pair list");
      ++i;
      skip_ws();
    }
  }
  if (out.empty()) bad_value(key, value, "a non-empty (x, y) pair list");
  return out;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string format_positions(const std::vector<Eigen::Vector2d>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += "(" + format_double(v[i].x()) + ", " + format_double(v[i].y()) + ")";
  }
  return out;
}

// --- env config -----------------------------------------------------------------

void env_to_kv(const env::EnvConfig& cfg, KvFile& kv) {
  kv.set("env", "n_mdcs", std::to_string(cfg.n_mdcs));
  kv.set("env", "n_channels", std::to_string(cfg.n_channels));
  kv.set("env", "area_m", format_double(cfg.area_m));
  kv.set("env", "v_max", format_double(cfg.v_max));
  kv.set("env", "t_slot", format_double(cfg.t_slot));
  kv.set("env", "data_size_bits", format_double(cfg.data_size_bits));
  kv.set("env", "t_max", std::to_string(cfg.t_max));
  kv.set("env", "r_time", format_double(cfg.r_time));
  kv.set("env", "r_fail", format_double(cfg.r_fail));
  kv.set("env", "r_penalty", format_double(cfg.r_penalty));
  kv.set("env", "w_data", format_double(cfg.w_data));
  kv.set("env", "reward_mode",
         cfg.reward_mode == env::RewardMode::kShaped ? "shaped" : "literal");
  kv.set("env", "clamp_mode",
         cfg.clamp_mode == env::ClampMode::kPerAxis ? "per_axis" : "euclidean");
  kv.set("env", "mdc_positions", format_positions(cfg.mdc_positions));
  kv.set("env", "uav_start", format_positions({cfg.uav_start}));
  kv.set("radio", "beta0", format_double(cfg.radio.beta0));
  kv.set("radio", "alpha", format_double(cfg.radio.alpha));
  kv.set("radio", "rician_k", format_double(cfg.radio.rician_k));
  kv.set("radio", "bandwidth_hz", format_double(cfg.radio.bandwidth_hz));
  kv.set("radio", "noise_power_w", format_double(cfg.radio.noise_power_w));
  kv.set("radio", "tx_power_w", format_double(cfg.radio.tx_power_w));
  kv.set("radio", "uav_height_m", format_double(cfg.radio.uav_height_m));
}

env::EnvConfig env_from_kv(const KvFile& kv, env::EnvConfig cfg) {
  SectionReader e(kv, "env");
  e.get_int("n_mdcs", cfg.n_mdcs);
  e.get_int("n_channels", cfg.n_channels);
  e.get_double("area_m", cfg.area_m);
  e.get_double("v_max", cfg.v_max);
  e.get_double("t_slot", cfg.t_slot);
  e.get_double("data_size_bits", cfg.data_size_bits);
  e.get_int("t_max", cfg.t_max);
  e.get_double("r_time", cfg.r_time);
  e.get_double("r_fail", cfg.r_fail);
  e.get_double("r_penalty", cfg.r_penalty);
  e.get_double("w_data", cfg.w_data);
  std::string mode;
  if (e.get("reward_mode", mode)) {
    if (mode == "shaped")
      cfg.reward_mode = env::RewardMode::kShaped;
    else if (mode == "literal")
      cfg.reward_mode = env::RewardMode::kLiteral;
    else
      throw std::invalid_argument("config key 'reward_mode': want shaped|literal, got '" +
                                  mode + "'");
  }
  if (e.get("clamp_mode", mode)) {
    if (mode == "per_axis")
      cfg.clamp_mode = env::ClampMode::kPerAxis;
    else if (mode == "euclidean")
      cfg.clamp_mode = env::ClampMode::kEuclidean;
    else
      throw std::invalid_argument("config key 'clamp_mode': want per_axis|euclidean, got '" +
                                  mode + "'");
  }
  std::string pos;
  if (e.get("mdc_positions", pos)) cfg.mdc_positions = parse_positions("mdc_positions", pos);
  if (e.get("uav_start", pos)) {
    std::vector<Eigen::Vector2d> v = parse_positions("uav_start", pos);
    if (v.size() != 1)
      throw std::invalid_argument("config key 'uav_start': want exactly one (x, y) pair");
    cfg.uav_start = v[0];
  }
  e.reject_unknown();

  SectionReader r(kv, "radio");
  r.get_double("beta0", cfg.radio.beta0);
  r.get_double("alpha", cfg.radio.alpha);
  r.get_double("rician_k", cfg.radio.rician_k);
  r.get_double("bandwidth_hz", cfg.radio.bandwidth_hz);
  r.get_double("noise_power_w", cfg.radio.noise_power_w);
  r.get_double("tx_power_w", cfg.radio.tx_power_w);
  r.get_double("uav_height_m", cfg.radio.uav_height_m);
  r.reject_unknown();
  return cfg;
}

// --- train config ----------------------------------------------------------------

void train_to_kv(const trainer::TrainConfig& cfg, KvFile& kv) {
  kv.set("train", "episodes", std::to_string(cfg.episodes));
  kv.set("train", "horizon", std::to_string(cfg.horizon));
  kv.set("train", "epochs", std::to_string(cfg.epochs));
  kv.set("train", "batch_size", std::to_string(cfg.batch_size));
  kv.set("train", "eval_period", std::to_string(cfg.eval_period));
  kv.set("train", "eval_episodes", std::to_string(cfg.eval_episodes));
  kv.set("train", "seed", std::to_string(cfg.seed));
  kv.set("train", "algo", trainer::algo_name(cfg.algo));
  kv.set("train", "eps_start", format_double(cfg.eps_start));
  kv.set("train", "eps_end", format_double(cfg.eps_end));
  kv.set("train", "eps_decay_frac", format_double(cfg.eps_decay_frac));
  ppo_to_section(cfg.ppo_discrete, "ppo_discrete", kv);
  ppo_to_section(cfg.ppo_continuous, "ppo_continuous", kv);
  kv.set("dqn", "gamma", format_double(cfg.dqn.gamma));
  kv.set("dqn", "lr", format_double(cfg.dqn.lr));
  kv.set("dqn", "batch_size", std::to_string(cfg.dqn.batch_size));
  kv.set("dqn", "capacity", std::to_string(cfg.dqn.capacity));
  kv.set("dqn", "warmup", std::to_string(cfg.dqn.warmup));
  kv.set("dqn", "update_period", std::to_string(cfg.dqn.update_period));
  kv.set("dqn", "target_sync_period", std::to_string(cfg.dqn.target_sync_period));
  kv.set("dqn", "hidden", format_int_list(cfg.dqn.hidden));
}

trainer::TrainConfig train_from_kv(const KvFile& kv, trainer::TrainConfig cfg) {
  SectionReader t(kv, "train");
  t.get_int("episodes", cfg.episodes);
  t.get_int("horizon", cfg.horizon);
  t.get_int("epochs", cfg.epochs);
  t.get_int("batch_size", cfg.batch_size);
  t.get_int("eval_period", cfg.eval_period);
  t.get_int("eval_episodes", cfg.eval_episodes);
  t.get_u64("seed", cfg.seed);
  std::string algo;
  if (t.get("algo", algo)) cfg.algo = trainer::algo_from_name(algo);
  t.get_double("eps_start", cfg.eps_start);
  t.get_double("eps_end", cfg.eps_end);
  t.get_double("eps_decay_frac", cfg.eps_decay_frac);
  t.reject_unknown();
  cfg.ppo_discrete = ppo_from_section(kv, "ppo_discrete", cfg.ppo_discrete);
  cfg.ppo_continuous = ppo_from_section(kv, "ppo_continuous", cfg.ppo_continuous);
  SectionReader d(kv, "dqn");
  d.get_double("gamma", cfg.dqn.gamma);
  d.get_double("lr", cfg.dqn.lr);
  d.get_int("batch_size", cfg.dqn.batch_size);
  d.get_int("capacity", cfg.dqn.capacity);
  d.get_int("warmup", cfg.dqn.warmup);
  d.get_int("update_period", cfg.dqn.update_period);
  d.get_int("target_sync_period", cfg.dqn.target_sync_period);
  d.get_int_list("hidden", cfg.dqn.hidden);
  d.reject_unknown();
  return cfg;
}

void check_known_sections(const KvFile& kv, const std::vector<std::string>& allowed) {
  for (const auto& s : kv.sections) {
    bool ok = false;
    for (const auto& a : allowed)
      if (s.name == a) ok = true;
    if (!ok) {
      std::string names;
      for (const auto& a : allowed) names += (names.empty() ? "" : ", ") + a;
      throw std::invalid_argument("unknown config section [" + s.name + "] (known: " +
                                  names + ")");
    }
  }
}

// --- CSV ---------------------------------------------------------------------------

namespace {

const char* kMetricsHeader =
    "episode,mission_time,success,sum_r_ch,sum_r_traj,actor_loss_d,critic_loss_d,"
    "actor_loss_c,critic_loss_c,epsilon";
const char* kEvalHeader = "episode,mission_time,success_rate,sum_r_ch,sum_r_traj";

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out = split(line, ',');
  for (auto& f : out) f = trim(f);
  return out;
}

void expect_header(std::istream& in, const char* want, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(std::string(what) + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != want)
    throw std::runtime_error(std::string(what) + ": unexpected header '" + line + "'");
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<trainer::MetricsRow>& rows) {
  out << kMetricsHeader << "\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << r.mission_time << ',' << (r.success ? 1 : 0) << ','
        << format_double(r.sum_r_ch) << ',' << format_double(r.sum_r_traj) << ','
        << format_double(r.actor_loss_d) << ',' << format_double(r.critic_loss_d) << ','
        << format_double(r.actor_loss_c) << ',' << format_double(r.critic_loss_c) << ','
        << format_double(r.epsilon) << "\n";
  }
}

std::vector<trainer::MetricsRow> read_metrics_csv(std::istream& in) {
  expect_header(in, kMetricsHeader, "metrics csv");
  std::vector<trainer::MetricsRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f = csv_fields(line);
    if (f.size() != 10) throw std::runtime_error("metrics csv: malformed row '" + line + "'");
    trainer::MetricsRow r;
    r.episode = static_cast<int>(parse_int("episode", f[0]));
    r.mission_time = static_cast<int>(parse_int("mission_time", f[1]));
    r.success = parse_int("success", f[2]) != 0;
    r.sum_r_ch = parse_double("sum_r_ch", f[3]);
    r.sum_r_traj = parse_double("sum_r_traj", f[4]);
    r.actor_loss_d = parse_double("actor_loss_d", f[5]);
    r.critic_loss_d = parse_double("critic_loss_d", f[6]);
    r.actor_loss_c = parse_double("actor_loss_c", f[7]);
    r.critic_loss_c = parse_double("critic_loss_c", f[8]);
    r.epsilon = parse_double("epsilon", f[9]);
    rows.push_back(r);
  }
  return rows;
}

void write_eval_csv(std::ostream& out, const std::vector<trainer::EvalRow>& rows) {
  out << kEvalHeader << "\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << format_double(r.mission_time) << ','
        << format_double(r.success_rate) << ',' << format_double(r.sum_r_ch) << ','
        << format_double(r.sum_r_traj) << "\n";
  }
}

std::vector<trainer::EvalRow> read_eval_csv(std::istream& in) {
  expect_header(in, kEvalHeader, "eval csv");
  std::vector<trainer::EvalRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f = csv_fields(line);
    if (f.size() != 5) throw std::runtime_error("eval csv: malformed row '" + line + "'");
    trainer::EvalRow r;
    r.episode = static_cast<int>(parse_int("episode", f[0]));
    r.mission_time = parse_double("mission_time", f[1]);
    r.success_rate = parse_double("success_rate", f[2]);
    r.sum_r_ch = parse_double("sum_r_ch", f[3]);
    r.sum_r_traj = parse_double("sum_r_traj", f[4]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(csv_fields(line));
  }
  return rows;
}

}  // namespace uavrl::io
