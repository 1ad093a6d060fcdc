#include "uavrl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace uavrl::harness {

namespace fs = std::filesystem;

namespace {

// Placement seed baked into the presets so a preset names one concrete scenario.
constexpr std::uint64_t kPresetPlacementSeed = 42;

env::EnvConfig base_env(int n_mdcs, double data_bits) {
  env::EnvConfig e;
  e.radio.beta0 = 1e3;  // link budget folded into the reference gain; see README
  e.radio.alpha = 2.0;
  e.radio.rician_k = 10.0;
  e.radio.bandwidth_hz = 5e6;
  e.radio.noise_power_w = 5e-8;
  e.radio.tx_power_w = 5.0;
  e.radio.uav_height_m = 100.0;
  e.n_mdcs = n_mdcs;
  e.n_channels = 3;
  e.area_m = 200.0;
  e.v_max = 10.0;
  e.t_slot = 0.5;
  e.data_size_bits = data_bits;
  e.t_max = 400;
  e.r_time = -1.0;
  e.r_fail = -400.0;
  e.r_penalty = -5.0;
  e.w_data = 1.0;
  e.mdc_positions = env::place_mdcs_uniform(n_mdcs, e.area_m, kPresetPlacementSeed);
  e.uav_start = {e.area_m / 2.0, e.area_m / 2.0};
  return e;
}

trainer::TrainConfig base_train() {
  trainer::TrainConfig t;
  t.episodes = 5000;
  return t;
}

std::string seeds_to_string(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(seeds[i]);
  }
  return out;
}

struct LoadedRun {
  std::string algo;
  std::uint64_t seed = 0;
  std::vector<trainer::MetricsRow> rows;
};

LoadedRun load_run(const fs::path& dir) {
  io::KvFile kv = io::KvFile::load(dir / "manifest.ini");
  LoadedRun run;
  const std::string* algo = kv.find("train", "algo");
  const std::string* seed = kv.find("train", "seed");
  if (!algo || !seed)
    throw std::runtime_error("manifest missing train.algo/train.seed: " +
                             (dir / "manifest.ini").string());
  run.algo = *algo;
  run.seed = static_cast<std::uint64_t>(io::parse_int("seed", *seed));
  std::ifstream in(dir / "metrics.csv");
  if (!in) throw std::runtime_error("cannot open " + (dir / "metrics.csv").string());
  run.rows = io::read_metrics_csv(in);
  return run;
}

std::vector<double> trailing_mean(const std::vector<double>& x, int window) {
  std::vector<double> out(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i];
    if (i >= static_cast<std::size_t>(window)) acc -= x[i - static_cast<std::size_t>(window)];
    out[i] = acc / static_cast<double>(std::min<std::size_t>(i + 1, window));
  }
  return out;
}

void save_checkpoints(trainer::Trainer& tr, const fs::path& dir) {
  {
    std::ofstream out(dir / "agent_continuous.bin", std::ios::binary);
    tr.continuous_agent().save(out);
  }
  if (auto* d = tr.discrete_agent()) {
    std::ofstream out(dir / "agent_discrete.bin", std::ios::binary);
    d->save(out);
  }
  if (auto* q = tr.dqn_agent()) {
    std::ofstream out(dir / "agent_dqn.bin", std::ios::binary);
    q->save(out);
  }
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "fig-time-50M",  "fig-time-100M", "fig-reward-50M",
      "fig-reward-100M", "fig-time-50M-8u", "custom"};
  return names;
}

ExperimentSpec make_preset(const std::string& name) {
  ExperimentSpec spec;
  spec.preset = name;
  spec.train = base_train();
  if (name == "fig-time-50M" || name == "fig-reward-50M" || name == "custom") {
    spec.env = base_env(5, 50e6);
  } else if (name == "fig-time-100M" || name == "fig-reward-100M") {
    spec.env = base_env(5, 100e6);
  } else if (name == "fig-time-50M-8u") {
    spec.env = base_env(8, 50e6);
  } else {
    std::string all;
    for (const auto& p : preset_names()) all += (all.empty() ? "" : ", ") + p;
    throw std::invalid_argument("unknown preset '" + name + "' (valid: " + all + ")");
  }
  return spec;
}

fs::path resolve_config(const std::string& name) {
  fs::path p(name);
  if (p.is_absolute() || fs::exists(p)) return p;
  if (const char* var = std::getenv(kConfigPathVar)) {
    std::stringstream ss(var);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
      if (dir.empty()) continue;
      fs::path cand = fs::path(dir) / name;
      if (fs::exists(cand)) return cand;
    }
  }
  return p;  // let the open fail with the plain name
}

std::vector<fs::path> cli_run(const ExperimentSpec& spec) {
  spec.env.validate();
  spec.train.validate();
  if (spec.seeds.empty()) throw std::invalid_argument("seed list must be non-empty");
  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec || !fs::is_directory(spec.out_dir))
    throw std::runtime_error("cannot create output directory " + spec.out_dir.string());

  std::vector<fs::path> run_dirs;
  std::vector<LoadedRun> finished;
  for (std::uint64_t seed : spec.seeds) {
    trainer::TrainConfig tc = spec.train;
    tc.seed = seed;
    const std::string run_name =
        spec.preset + "-" + trainer::algo_name(tc.algo) + "-seed" + std::to_string(seed);
    fs::path dir = spec.out_dir / run_name;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
      throw std::runtime_error("cannot create run directory " + dir.string());

    io::KvFile manifest;
    manifest.set("run", "preset", spec.preset);
    manifest.set("run", "code_version", kCodeVersion);
    manifest.set("run", "seeds", seeds_to_string(spec.seeds));
    io::env_to_kv(spec.env, manifest);
    io::train_to_kv(tc, manifest);
    manifest.save(dir / "manifest.ini");

    std::cerr << "[run] " << run_name << ": " << tc.episodes << " episodes\n";
    trainer::Trainer tr(env::Environment(spec.env), tc);
    trainer::Metrics metrics = tr.train();
    {
      std::ofstream out(dir / "metrics.csv");
      io::write_metrics_csv(out, metrics.rows);
    }
    {
      std::ofstream out(dir / "eval.csv");
      io::write_eval_csv(out, metrics.eval_rows);
    }
    save_checkpoints(tr, dir);
    finished.push_back(LoadedRun{trainer::algo_name(tc.algo), seed, std::move(metrics.rows)});
    run_dirs.push_back(dir);
  }

  std::ofstream out(spec.out_dir / "comparison.csv");
  out << "episode,algorithm,seed,mission_time,success,sum_r_ch,sum_r_traj\n";
  for (const auto& run : finished) {
    for (const auto& r : run.rows) {
      out << r.episode << ',' << run.algo << ',' << run.seed << ',' << r.mission_time << ','
          << (r.success ? 1 : 0) << ',' << io::format_double(r.sum_r_ch) << ','
          << io::format_double(r.sum_r_traj) << "\n";
    }
  }
  return run_dirs;
}

void cli_compare(const std::vector<fs::path>& run_dirs, const fs::path& out_dir) {
  if (run_dirs.empty()) throw std::runtime_error("no runs found");
  std::vector<LoadedRun> runs;
  for (const auto& dir : run_dirs) runs.push_back(load_run(dir));

  std::size_t min_len = runs.front().rows.size();
  std::size_t max_len = min_len;
  for (const auto& r : runs) {
    min_len = std::min(min_len, r.rows.size());
    max_len = std::max(max_len, r.rows.size());
  }
  if (min_len == 0) throw std::runtime_error("a run has an empty metrics table");
  if (min_len != max_len)
    std::cerr << "[compare] episode counts differ (" << min_len << ".." << max_len
              << "); aligning to shortest\n";

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());

  {
    std::ofstream out(out_dir / "compare_long.csv");
    out << "episode,algorithm,seed,mission_time,mission_time_smooth100,success,"
           "sum_r_ch,sum_r_traj,sum_r_traj_smooth100\n";
    for (const auto& run : runs) {
      std::vector<double> mt, rt;
      for (std::size_t i = 0; i < min_len; ++i) {
        mt.push_back(run.rows[i].mission_time);
        rt.push_back(run.rows[i].sum_r_traj);
      }
      std::vector<double> mts = trailing_mean(mt, 100);
      std::vector<double> rts = trailing_mean(rt, 100);
      for (std::size_t i = 0; i < min_len; ++i) {
        const auto& r = run.rows[i];
        out << r.episode << ',' << run.algo << ',' << run.seed << ',' << r.mission_time
            << ',' << io::format_double(mts[i]) << ',' << (r.success ? 1 : 0) << ','
            << io::format_double(r.sum_r_ch) << ',' << io::format_double(r.sum_r_traj)
            << ',' << io::format_double(rts[i]) << "\n";
      }
    }
  }

  // Final-window stats pooled across the seeds of each algorithm.
  const std::size_t window = std::min<std::size_t>(500, min_len);
  std::map<std::string, std::vector<const LoadedRun*>> by_algo;
  for (const auto& r : runs) by_algo[r.algo].push_back(&r);

  std::ofstream summary(out_dir / "compare_summary.csv");
  summary << "algorithm,runs,final_window,mean_mission_time,var_mission_time,timeout_rate\n";
  std::cout << "algorithm  runs  window  mean_mt  var_mt  timeout_rate\n";
  for (const auto& [algo, group] : by_algo) {
    std::vector<double> tail;
    double timeouts = 0.0;
    for (const LoadedRun* run : group) {
      for (std::size_t i = min_len - window; i < min_len; ++i) {
        tail.push_back(run->rows[i].mission_time);
        if (!run->rows[i].success) timeouts += 1.0;
      }
    }
    double mean = 0.0;
    for (double v : tail) mean += v;
    mean /= static_cast<double>(tail.size());
    double var = 0.0;
    for (double v : tail) var += (v - mean) * (v - mean);
    var /= static_cast<double>(tail.size());
    double timeout_rate = timeouts / static_cast<double>(tail.size());
    summary << algo << ',' << group.size() << ',' << window << ','
            << io::format_double(mean) << ',' << io::format_double(var) << ','
            << io::format_double(timeout_rate) << "\n";
    std::cout << algo << "  " << group.size() << "  " << window << "  " << mean << "  "
              << var << "  " << timeout_rate << "\n";
  }
}

void cli_scenario(int n, int m, double area_m, std::uint64_t seed, const fs::path& out_file) {
  env::EnvConfig e = base_env(5, 50e6);
  e.n_mdcs = n;
  e.n_channels = m;
  e.area_m = area_m;
  e.mdc_positions = env::place_mdcs_uniform(n, area_m, seed);
  e.uav_start = {area_m / 2.0, area_m / 2.0};
  e.validate();
  io::KvFile kv;
  io::env_to_kv(e, kv);
  kv.save(out_file);
}

void cli_eval(const fs::path& run_dir, std::uint64_t seed, const fs::path& out_file) {
  io::KvFile manifest = io::KvFile::load(run_dir / "manifest.ini");
  io::check_known_sections(manifest, {"run", "env", "radio", "train", "ppo_discrete",
                                      "ppo_continuous", "dqn"});
  env::EnvConfig ec = io::env_from_kv(manifest);
  trainer::TrainConfig tc = io::train_from_kv(manifest);
  env::Environment e(ec);
  trainer::Trainer tr(env::Environment(ec), tc);
  {
    std::ifstream in(run_dir / "agent_continuous.bin", std::ios::binary);
    if (!in) throw std::runtime_error("missing checkpoint agent_continuous.bin");
    tr.continuous_agent().load(in);
  }
  if (auto* d = tr.discrete_agent()) {
    std::ifstream in(run_dir / "agent_discrete.bin", std::ios::binary);
    if (!in) throw std::runtime_error("missing checkpoint agent_discrete.bin");
    d->load(in);
  }
  if (auto* q = tr.dqn_agent()) {
    std::ifstream in(run_dir / "agent_dqn.bin", std::ios::binary);
    if (!in) throw std::runtime_error("missing checkpoint agent_dqn.bin");
    q->load(in);
  }

  Rng rng(derive_seed(seed, 6));
  env::EnvState st = e.reset(rng);
  std::ofstream out(out_file);
  if (!out) throw std::runtime_error("cannot write " + out_file.string());
  out << "step,x_uav,y_uav,alloc_encoded,r_ch,r_traj,collected_total";
  for (int i = 0; i < ec.n_mdcs; ++i) out << ",u_res_" << i;
  out << "\n";
  double collected_total = 0.0;
  while (!e.is_terminal(st)) {
    Eigen::VectorXd sd = e.state_vector_discrete(st);
    Eigen::VectorXd sc = e.state_vector_continuous(st);
    std::int64_t a_ch;
    if (auto* d = tr.discrete_agent())
      a_ch = d->act_greedy(sd);
    else
      a_ch = tr.dqn_agent()->act_greedy(sd);
    Eigen::Vector2d mu = tr.continuous_agent().act_greedy(sc);
    env::StepOutcome o = e.step(st, a_ch, env::TrajectoryAction{mu.x(), mu.y()}, rng);
    collected_total += o.collected_bits.sum();
    out << st.step << ',' << io::format_double(st.uav_xy.x()) << ','
        << io::format_double(st.uav_xy.y()) << ',' << a_ch << ','
        << io::format_double(o.r_ch) << ',' << io::format_double(o.r_traj) << ','
        << io::format_double(collected_total);
    for (int i = 0; i < ec.n_mdcs; ++i) out << ',' << io::format_double(st.u_res(i));
    out << "\n";
  }
}

}  // namespace uavrl::harness
