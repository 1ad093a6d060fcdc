#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "uavrl/io.hpp"

using namespace uavrl;
using namespace uavrl::io;

TEST_CASE("kv parsing: sections, comments, ordering") {
  std::stringstream in(
      "# leading comment\n"
      "[env]\n"
      "n_mdcs = 5\n"
      "  area_m=200.5  \n"
      "; another comment style\n"
      "\n"
      "[radio]\n"
      "note = a = b\n");  // only the first '=' splits
  KvFile kv = KvFile::parse(in);
  REQUIRE(kv.sections.size() == 2);
  CHECK(kv.sections[0].name == "env");
  CHECK(kv.sections[1].name == "radio");
  REQUIRE(kv.find("env", "area_m") != nullptr);
  CHECK(*kv.find("env", "area_m") == "200.5");
  CHECK(*kv.find("radio", "note") == "a = b");
  CHECK(kv.find("env", "missing") == nullptr);
  CHECK(kv.find("nope", "n_mdcs") == nullptr);

  // write/parse roundtrip preserves everything including order
  std::stringstream out;
  kv.write(out);
  std::stringstream again(out.str());
  KvFile kv2 = KvFile::parse(again);
  std::stringstream out2;
  kv2.write(out2);
  CHECK(out.str() == out2.str());
}

TEST_CASE("kv parsing: malformed input names the line") {
  auto parse_str = [](const char* text) {
    std::stringstream in(text);
    return KvFile::parse(in);
  };
  CHECK_THROWS_WITH_AS(parse_str("x = 1\n"), "config line 1: key outside any [section]",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_str("[a]\nkey value\n"),
                       "config line 2: expected key = value", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_str("[a]\nk = 1\nk = 2\n"),
                       "config line 3: duplicate key 'k'", std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_str("[a]\n[a]\n"), "config line 2: duplicate section [a]",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_str("[broken\n"), "config line 1: malformed section header",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_str("[a]\n= 5\n"), "config line 2: empty key",
                       std::invalid_argument);
}

TEST_CASE("kv set updates in place or appends") {
  KvFile kv;
  kv.set("s", "a", "1");
  kv.set("s", "b", "2");
  kv.set("s", "a", "3");
  kv.set("t", "c", "4");
  REQUIRE(kv.sections.size() == 2);
  CHECK(kv.sections[0].entries.size() == 2);
  CHECK(*kv.find("s", "a") == "3");
  CHECK(*kv.find("t", "c") == "4");
}

TEST_CASE("typed value parsing") {
  CHECK(parse_double("k", "3.5e-2") == 3.5e-2);
  CHECK(parse_double("k", " 7 ") == 7.0);
  CHECK(std::isinf(parse_double("k", "inf")));
  CHECK(parse_double("k", "-inf") == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_WITH_AS(parse_double("area_m", "abc"),
                       "config key 'area_m': cannot parse 'abc' as a number",
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_double("k", "1.5junk"), std::invalid_argument);

  CHECK(parse_int("k", "42") == 42);
  CHECK(parse_int("k", "-7") == -7);
  CHECK_THROWS_AS(parse_int("k", "4.2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int("k", "99999999999999999999"), std::invalid_argument);

  CHECK(parse_bool("k", "true"));
  CHECK(parse_bool("k", "1"));
  CHECK_FALSE(parse_bool("k", "false"));
  CHECK_FALSE(parse_bool("k", "0"));
  CHECK_THROWS_AS(parse_bool("k", "yes"), std::invalid_argument);

  CHECK(parse_int_list("k", "128, 64") == std::vector<int>{128, 64});
  CHECK(parse_int_list("k", "8") == std::vector<int>{8});
  CHECK_THROWS_AS(parse_int_list("k", "1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_int_list("k", ""), std::invalid_argument);

  auto pos = parse_positions("k", "(1, 2), (3.5, -4)");
  REQUIRE(pos.size() == 2);
  CHECK(pos[0] == Eigen::Vector2d(1.0, 2.0));
  CHECK(pos[1] == Eigen::Vector2d(3.5, -4.0));
  CHECK(parse_positions("k", "(0,0)").size() == 1);
  CHECK_THROWS_AS(parse_positions("k", "(1, 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_positions("k", "(1)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_positions("k", "1, 2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_positions("k", ""), std::invalid_argument);
  CHECK_THROWS_AS(parse_positions("k", "(1,2) (3,4)"), std::invalid_argument);
}

TEST_CASE("double formatting is round-trip exact") {
  for (double v : {0.1, 1.0 / 3.0, 5e-8, -400.0, 2.5e7, 1e-323,
                   std::numeric_limits<double>::max()}) {
    CHECK(parse_double("k", format_double(v)) == v);
    CHECK(parse_double("k", format_double(-v)) == -v);
  }
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("env config roundtrips through kv") {
  env::EnvConfig cfg;
  cfg.n_mdcs = 3;
  cfg.n_channels = 2;
  cfg.area_m = 123.5;
  cfg.v_max = 7.25;
  cfg.t_slot = 0.4;
  cfg.data_size_bits = 3.3e7;
  cfg.t_max = 321;
  cfg.r_time = -0.5;
  cfg.r_fail = -123.0;
  cfg.r_penalty = -2.5;
  cfg.w_data = 1.75;
  cfg.reward_mode = env::RewardMode::kLiteral;
  cfg.clamp_mode = env::ClampMode::kEuclidean;
  cfg.mdc_positions = {Eigen::Vector2d(1.5, 2.5), Eigen::Vector2d(10, 20),
                       Eigen::Vector2d(100, 0.125)};
  cfg.uav_start = Eigen::Vector2d(61.7, 62.3);
  cfg.radio.beta0 = 1e3;
  cfg.radio.alpha = 2.5;
  cfg.radio.rician_k = std::numeric_limits<double>::infinity();
  cfg.radio.bandwidth_hz = 4.5e6;
  cfg.radio.noise_power_w = 6e-8;
  cfg.radio.tx_power_w = 4.0;
  cfg.radio.uav_height_m = 55.0;

  KvFile kv;
  env_to_kv(cfg, kv);
  std::stringstream ss;
  kv.write(ss);
  KvFile back = KvFile::parse(ss);
  env::EnvConfig got = env_from_kv(back);

  CHECK(got.n_mdcs == cfg.n_mdcs);
  CHECK(got.n_channels == cfg.n_channels);
  CHECK(got.area_m == cfg.area_m);
  CHECK(got.v_max == cfg.v_max);
  CHECK(got.t_slot == cfg.t_slot);
  CHECK(got.data_size_bits == cfg.data_size_bits);
  CHECK(got.t_max == cfg.t_max);
  CHECK(got.r_time == cfg.r_time);
  CHECK(got.r_fail == cfg.r_fail);
  CHECK(got.r_penalty == cfg.r_penalty);
  CHECK(got.w_data == cfg.w_data);
  CHECK(got.reward_mode == cfg.reward_mode);
  CHECK(got.clamp_mode == cfg.clamp_mode);
  REQUIRE(got.mdc_positions.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(got.mdc_positions[i] == cfg.mdc_positions[i]);
  CHECK(got.uav_start == cfg.uav_start);
  CHECK(got.radio.beta0 == cfg.radio.beta0);
  CHECK(got.radio.alpha == cfg.radio.alpha);
  CHECK(std::isinf(got.radio.rician_k));
  CHECK(got.radio.bandwidth_hz == cfg.radio.bandwidth_hz);
  CHECK(got.radio.noise_power_w == cfg.radio.noise_power_w);
  CHECK(got.radio.tx_power_w == cfg.radio.tx_power_w);
  CHECK(got.radio.uav_height_m == cfg.radio.uav_height_m);
}

TEST_CASE("env config loader rejects junk") {
  KvFile kv;
  kv.set("env", "bogus", "1");
  CHECK_THROWS_WITH_AS(env_from_kv(kv), "unknown config key 'env.bogus'",
                       std::invalid_argument);

  kv = KvFile{};
  kv.set("env", "reward_mode", "magic");
  CHECK_THROWS_WITH_AS(env_from_kv(kv),
                       "config key 'reward_mode': want shaped|literal, got 'magic'",
                       std::invalid_argument);

  kv = KvFile{};
  kv.set("env", "clamp_mode", "diagonal");
  CHECK_THROWS_AS(env_from_kv(kv), std::invalid_argument);

  kv = KvFile{};
  kv.set("env", "uav_start", "(1, 2), (3, 4)");
  CHECK_THROWS_WITH_AS(env_from_kv(kv),
                       "config key 'uav_start': want exactly one (x, y) pair",
                       std::invalid_argument);

  kv = KvFile{};
  kv.set("radio", "carrier_hz", "2.4e9");
  CHECK_THROWS_WITH_AS(env_from_kv(kv), "unknown config key 'radio.carrier_hz'",
                       std::invalid_argument);
}

TEST_CASE("partial env kv keeps defaults for absent keys") {
  KvFile kv;
  kv.set("env", "t_max", "99");
  env::EnvConfig got = env_from_kv(kv);
  env::EnvConfig def;
  CHECK(got.t_max == 99);
  CHECK(got.area_m == def.area_m);
  CHECK(got.radio.beta0 == def.radio.beta0);
}

TEST_CASE("train config roundtrips through kv") {
  trainer::TrainConfig cfg;
  cfg.episodes = 1234;
  cfg.horizon = 512;
  cfg.epochs = 7;
  cfg.batch_size = 48;
  cfg.eval_period = 25;
  cfg.eval_episodes = 3;
  cfg.seed = 987654321ULL;
  cfg.algo = trainer::Algo::kDuelingDqn;
  cfg.eps_start = 0.9;
  cfg.eps_end = 0.05;
  cfg.eps_decay_frac = 0.25;
  cfg.ppo_discrete.clip_ratio = 0.15;
  cfg.ppo_discrete.hidden = {8, 4};
  cfg.ppo_discrete.use_gae = true;
  cfg.ppo_discrete.gae_lambda = 0.9;
  cfg.ppo_continuous.sigma_init = 1.5;
  cfg.ppo_continuous.sigma_floor = 0.02;
  cfg.ppo_continuous.entropy_coef = 0.03;
  cfg.dqn.lr = 5e-4;
  cfg.dqn.hidden = {64};
  cfg.dqn.target_sync_period = 123;

  KvFile kv;
  train_to_kv(cfg, kv);
  std::stringstream ss;
  kv.write(ss);
  KvFile back = KvFile::parse(ss);
  trainer::TrainConfig got = train_from_kv(back);

  CHECK(got.episodes == cfg.episodes);
  CHECK(got.horizon == cfg.horizon);
  CHECK(got.epochs == cfg.epochs);
  CHECK(got.batch_size == cfg.batch_size);
  CHECK(got.eval_period == cfg.eval_period);
  CHECK(got.eval_episodes == cfg.eval_episodes);
  CHECK(got.seed == cfg.seed);
  CHECK(got.algo == cfg.algo);
  CHECK(got.eps_start == cfg.eps_start);
  CHECK(got.eps_end == cfg.eps_end);
  CHECK(got.eps_decay_frac == cfg.eps_decay_frac);
  CHECK(got.ppo_discrete.clip_ratio == cfg.ppo_discrete.clip_ratio);
  CHECK(got.ppo_discrete.hidden == cfg.ppo_discrete.hidden);
  CHECK(got.ppo_discrete.use_gae == cfg.ppo_discrete.use_gae);
  CHECK(got.ppo_discrete.gae_lambda == cfg.ppo_discrete.gae_lambda);
  CHECK(got.ppo_continuous.sigma_init == cfg.ppo_continuous.sigma_init);
  CHECK(got.ppo_continuous.sigma_floor == cfg.ppo_continuous.sigma_floor);
  CHECK(got.ppo_continuous.entropy_coef == cfg.ppo_continuous.entropy_coef);
  CHECK(got.dqn.lr == cfg.dqn.lr);
  CHECK(got.dqn.hidden == cfg.dqn.hidden);
  CHECK(got.dqn.target_sync_period == cfg.dqn.target_sync_period);

  KvFile junk;
  junk.set("train", "bogus", "1");
  CHECK_THROWS_WITH_AS(train_from_kv(junk), "unknown config key 'train.bogus'",
                       std::invalid_argument);
  junk = KvFile{};
  junk.set("ppo_discrete", "momentum", "0.9");
  CHECK_THROWS_WITH_AS(train_from_kv(junk), "unknown config key 'ppo_discrete.momentum'",
                       std::invalid_argument);
  junk = KvFile{};
  junk.set("dqn", "double_q", "true");
  CHECK_THROWS_AS(train_from_kv(junk), std::invalid_argument);
  junk = KvFile{};
  junk.set("train", "algo", "a2c");
  CHECK_THROWS_AS(train_from_kv(junk), std::invalid_argument);
}

TEST_CASE("section allow-list") {
  KvFile kv;
  kv.set("env", "t_max", "5");
  kv.set("radio", "alpha", "2");
  CHECK_NOTHROW(check_known_sections(kv, {"env", "radio", "train"}));
  kv.set("extras", "x", "1");
  CHECK_THROWS_WITH_AS(check_known_sections(kv, {"env", "radio"}),
                       "unknown config section [extras] (known: env, radio)",
                       std::invalid_argument);
}

TEST_CASE("metrics csv roundtrip and validation") {
  std::vector<trainer::MetricsRow> rows;
  rows.push_back(trainer::MetricsRow{1, 37, true, -37.0 + 2.0, -41.25, 0.125, 3.5, -0.07,
                                     1.0 / 3.0, 0.5});
  rows.push_back(trainer::MetricsRow{2, 400, false, -437.0, -500.5, 0.0, 0.0, 0.0, 0.0,
                                     0.37});
  std::stringstream ss;
  write_metrics_csv(ss, rows);
  std::string text = ss.str();
  CHECK(text.substr(0, text.find('\n')) ==
        "episode,mission_time,success,sum_r_ch,sum_r_traj,actor_loss_d,critic_loss_d,"
        "actor_loss_c,critic_loss_c,epsilon");

  std::stringstream in(text);
  std::vector<trainer::MetricsRow> got = read_metrics_csv(in);
  REQUIRE(got.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(got[i].episode == rows[i].episode);
    CHECK(got[i].mission_time == rows[i].mission_time);
    CHECK(got[i].success == rows[i].success);
    CHECK(got[i].sum_r_ch == rows[i].sum_r_ch);
    CHECK(got[i].sum_r_traj == rows[i].sum_r_traj);
    CHECK(got[i].actor_loss_d == rows[i].actor_loss_d);
    CHECK(got[i].critic_loss_d == rows[i].critic_loss_d);
    CHECK(got[i].actor_loss_c == rows[i].actor_loss_c);
    CHECK(got[i].critic_loss_c == rows[i].critic_loss_c);
    CHECK(got[i].epsilon == rows[i].epsilon);
  }

  std::stringstream bad_header("episode,mission_time\n1,2\n");
  CHECK_THROWS_AS(read_metrics_csv(bad_header), std::runtime_error);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_metrics_csv(empty), std::runtime_error);
  std::stringstream short_row(text.substr(0, text.find('\n') + 1) + "1,2,3\n");
  CHECK_THROWS_AS(read_metrics_csv(short_row), std::runtime_error);
}

TEST_CASE("eval csv roundtrip and validation") {
  std::vector<trainer::EvalRow> rows;
  rows.push_back(trainer::EvalRow{10, 42.5, 0.75, -40.125, -39.0});
  rows.push_back(trainer::EvalRow{20, 36.0, 1.0, -34.0, -33.5});
  std::stringstream ss;
  write_eval_csv(ss, rows);
  std::string text = ss.str();
  CHECK(text.substr(0, text.find('\n')) ==
        "episode,mission_time,success_rate,sum_r_ch,sum_r_traj");

  std::stringstream in(text);
  std::vector<trainer::EvalRow> got = read_eval_csv(in);
  REQUIRE(got.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(got[i].episode == rows[i].episode);
    CHECK(got[i].mission_time == rows[i].mission_time);
    CHECK(got[i].success_rate == rows[i].success_rate);
    CHECK(got[i].sum_r_ch == rows[i].sum_r_ch);
    CHECK(got[i].sum_r_traj == rows[i].sum_r_traj);
  }

  std::stringstream wrong("episode,foo\n");
  CHECK_THROWS_AS(read_eval_csv(wrong), std::runtime_error);
}

TEST_CASE("generic csv reader") {
  std::stringstream in("a,b,c\r\n1, 2 ,3\n\n4,5,6\n");
  auto rows = read_csv(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"a", "b", "c"});
  CHECK(rows[1] == std::vector<std::string>{"1", "2", "3"});
  CHECK(rows[2] == std::vector<std::string>{"4", "5", "6"});
}
