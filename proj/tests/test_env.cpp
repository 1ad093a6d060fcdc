#include <cmath>
#include <limits>

#include "doctest.h"
#include "uavrl/env.hpp"

using namespace uavrl;
using namespace uavrl::env;

namespace {

// Small but physically sensible setup: rates high enough that missions finish.
EnvConfig small_cfg(int n = 2, int m = 2) {
  EnvConfig c;
  c.radio.beta0 = 1e3;
  c.n_mdcs = n;
  c.n_channels = m;
  c.area_m = 100.0;
  c.data_size_bits = 2e7;
  c.t_max = 200;
  c.mdc_positions.clear();
  for (int i = 0; i < n; ++i)
    c.mdc_positions.emplace_back(20.0 + 15.0 * i, 30.0 + 10.0 * i);
  c.uav_start = {50.0, 50.0};
  return c;
}

}  // namespace

TEST_CASE("allocation codec: pinned values") {
  CHECK(encode_allocation({{0, 0, 0, 0}}, 3) == 0);
  CHECK(encode_allocation({{2, 0}}, 3) == 2);
  CHECK(encode_allocation({{3, 3, 3, 3, 3}}, 3) == 1023);
  CHECK(decode_allocation(0, 5, 3).per_mdc == std::vector<int>{0, 0, 0, 0, 0});
  CHECK(decode_allocation(2, 2, 3).per_mdc == std::vector<int>{2, 0});
  CHECK(decode_allocation(1023, 5, 3).per_mdc == std::vector<int>{3, 3, 3, 3, 3});

  CHECK_THROWS_AS(encode_allocation({{4, 0}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(encode_allocation({{-1}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(decode_allocation(1024, 5, 3), std::out_of_range);
  CHECK_THROWS_AS(decode_allocation(-1, 5, 3), std::out_of_range);
}

TEST_CASE("allocation codec: exhaustive and randomized roundtrips") {
  for (AllocationAction a = 0; a < 1024; ++a)
    CHECK(encode_allocation(decode_allocation(a, 5, 3), 3) == a);
  for (AllocationAction a = 0; a < 256; ++a)
    CHECK(encode_allocation(decode_allocation(a, 4, 3), 3) == a);

  Rng rng(77);
  const AllocationAction range = 65536;  // 4^8
  for (int i = 0; i < 10000; ++i) {
    AllocationAction a = rng.uniform_int(range);
    Allocation alloc = decode_allocation(a, 8, 3);
    for (int v : alloc.per_mdc) CHECK((v >= 0 && v <= 3));
    CHECK(encode_allocation(alloc, 3) == a);
  }
}

TEST_CASE("config validation") {
  EnvConfig c = small_cfg();
  CHECK_NOTHROW(c.validate());
  CHECK(c.n_actions() == 9);
  CHECK(c.discrete_state_dim() == 2 + 4);
  CHECK(c.continuous_state_dim() == 8);
  CHECK(c.move_bound() == doctest::Approx(5.0));

  c.r_fail = c.r_time;  // must be strictly worse than the per-slot penalty
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_cfg();
  c.mdc_positions.pop_back();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_cfg();
  c.mdc_positions[0] = {-1.0, 10.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_cfg();
  c.n_mdcs = 40;  // 3^40 overflows the encoded action range
  c.mdc_positions.assign(40, Eigen::Vector2d(1.0, 1.0));
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("uniform placement is seeded") {
  auto a = place_mdcs_uniform(5, 200.0, 7);
  auto b = place_mdcs_uniform(5, 200.0, 7);
  auto c = place_mdcs_uniform(5, 200.0, 8);
  REQUIRE(a.size() == 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK((a[i].x() >= 0.0 && a[i].x() <= 200.0));
    CHECK((a[i].y() >= 0.0 && a[i].y() <= 200.0));
  }
  bool same = true;
  for (std::size_t i = 0; i < a.size(); ++i) same = same && a[i] == c[i];
  CHECK(!same);
}

TEST_CASE("reset contract") {
  Environment e(small_cfg());
  Rng r1(9), r2(9), r3(10);
  EnvState s1 = e.reset(r1);
  EnvState s2 = e.reset(r2);
  EnvState s3 = e.reset(r3);
  CHECK((s1.u_res.array() == 2e7).all());
  CHECK(s1.uav_xy == Eigen::Vector2d(50.0, 50.0));
  CHECK(s1.step == 0);
  CHECK(s1.fading_sq == s2.fading_sq);
  CHECK(s1.u_res == s3.u_res);
  CHECK(s1.uav_xy == s3.uav_xy);
  CHECK(s1.fading_sq != s3.fading_sq);
}

TEST_CASE("movement clamping") {
  EnvConfig c = small_cfg();
  Rng rng(1);
  SUBCASE("per-axis") {
    Environment e(c);
    EnvState s = e.reset(rng);
    e.step(s, 0, {100.0, -100.0}, rng);
    CHECK(s.uav_xy == Eigen::Vector2d(55.0, 45.0));
  }
  SUBCASE("euclidean rescale") {
    c.clamp_mode = ClampMode::kEuclidean;
    Environment e(c);
    EnvState s = e.reset(rng);
    e.step(s, 0, {30.0, 40.0}, rng);  // norm 50 scaled down to 5
    CHECK(s.uav_xy.x() == doctest::Approx(53.0).epsilon(1e-12));
    CHECK(s.uav_xy.y() == doctest::Approx(54.0).epsilon(1e-12));
  }
  SUBCASE("euclidean keeps in-bound moves") {
    c.clamp_mode = ClampMode::kEuclidean;
    Environment e(c);
    EnvState s = e.reset(rng);
    e.step(s, 0, {3.0, -1.0}, rng);
    CHECK(s.uav_xy == Eigen::Vector2d(53.0, 49.0));
  }
}

TEST_CASE("slot rates: silence and closed forms") {
  EnvConfig c = small_cfg(2, 1);
  c.radio.rician_k = std::numeric_limits<double>::infinity();
  // symmetric geometry: both MDCs equidistant from the UAV start
  c.mdc_positions = {{40.0, 50.0}, {60.0, 50.0}};
  Environment e(c);
  Rng rng(3);
  EnvState s = e.reset(rng);

  Eigen::VectorXd off = e.slot_rates(s, {{0, 0}});
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);

  double d = channel::distance(c.mdc_positions[0], s.uav_xy, c.radio.uav_height_m);
  double snr = c.radio.tx_power_w *
               channel::cnr(c.radio, channel::large_scale_gain(c.radio, d));
  double solo = c.radio.bandwidth_hz * std::log2(1.0 + snr);
  Eigen::VectorXd one = e.slot_rates(s, {{1, 0}});
  CHECK(one(0) == doctest::Approx(solo).epsilon(1e-12));
  CHECK(one(1) == 0.0);

  double shared = c.radio.bandwidth_hz * std::log2(1.0 + snr / (1.0 + snr));
  Eigen::VectorXd both = e.slot_rates(s, {{1, 1}});
  CHECK(both(0) == doctest::Approx(shared).epsilon(1e-12));
  CHECK(both(1) == doctest::Approx(shared).epsilon(1e-12));

  // a drained co-channel MDC stops interfering
  s.u_res(1) = 0.0;
  Eigen::VectorXd alone = e.slot_rates(s, {{1, 1}});
  CHECK(alone(0) == doctest::Approx(solo).epsilon(1e-12));
  CHECK(alone(1) == 0.0);
}

TEST_CASE("step: rewards, flags, terminal contract") {
  EnvConfig c = small_cfg();
  Environment e(c);
  Rng rng(5);
  EnvState s = e.reset(rng);

  // all-unassigned slot: shaped reward collapses to the time penalty
  StepOutcome out = e.step(s, 0, {0.0, 0.0}, rng);
  CHECK(out.r_ch == doctest::Approx(c.r_time).epsilon(1e-12));
  CHECK(out.r_traj == out.r_ch);  // inside the region
  CHECK(out.collected_bits.cwiseAbs().maxCoeff() == 0.0);
  CHECK(!out.done);
  CHECK(s.step == 1);

  // leaving the region adds the penalty on the trajectory side only
  s.uav_xy = {0.5, 0.5};
  out = e.step(s, 0, {-5.0, -5.0}, rng);
  CHECK(s.uav_xy.x() < 0.0);
  CHECK(out.r_traj == doctest::Approx(out.r_ch + c.r_penalty).epsilon(1e-12));

  // literal reward mode: zero collection gives exactly zero
  EnvConfig lit = small_cfg();
  lit.reward_mode = RewardMode::kLiteral;
  Environment el(lit);
  EnvState sl = el.reset(rng);
  StepOutcome lout = el.step(sl, 0, {0.0, 0.0}, rng);
  CHECK(lout.r_ch == 0.0);
}

TEST_CASE("step: collection reward tracks drained bits") {
  EnvConfig c = small_cfg();
  c.w_data = 2.0;
  Environment e(c);
  Rng rng(6);
  EnvState s = e.reset(rng);
  Allocation all{{1, 2}};
  AllocationAction a = encode_allocation(all, c.n_channels);
  StepOutcome out = e.step(s, a, {0.0, 0.0}, rng);
  CHECK(out.collected_bits.minCoeff() > 0.0);
  CHECK(out.r_ch == doctest::Approx(c.r_time +
                                    c.w_data * out.collected_bits.sum() /
                                        c.data_size_bits));
}

TEST_CASE("timeout: forced failure at t_max") {
  EnvConfig c = small_cfg();
  c.t_max = 5;
  c.data_size_bits = 1e18;  // cannot possibly finish
  Environment e(c);
  Rng rng(8);
  EnvState s = e.reset(rng);
  StepOutcome last;
  int steps = 0;
  while (!e.is_terminal(s)) {
    last = e.step(s, 0, {1.0, 1.0}, rng);
    ++steps;
  }
  CHECK(steps == 6);
  CHECK(s.step == 6);
  CHECK(last.done);
  CHECK(!last.success);
  CHECK(last.r_ch == doctest::Approx(c.r_fail).epsilon(1e-12));
  CHECK_THROWS_AS(e.step(s, 0, {0.0, 0.0}, rng), std::logic_error);
}

TEST_CASE("hover mission time matches the closed form") {
  EnvConfig c = small_cfg(1, 1);
  c.radio.rician_k = std::numeric_limits<double>::infinity();
  c.mdc_positions = {{50.0, 50.0}};  // directly under the start position
  Environment e(c);
  Rng rng(11);
  EnvState s = e.reset(rng);

  double snr = c.radio.tx_power_w *
               channel::cnr(c.radio, channel::large_scale_gain(c.radio,
                                                               c.radio.uav_height_m));
  double rate = c.radio.bandwidth_hz * std::log2(1.0 + snr);
  int want = static_cast<int>(std::ceil(c.data_size_bits / (c.t_slot * rate)));

  int t = 0;
  bool success = false;
  while (!e.is_terminal(s)) {
    StepOutcome out = e.step(s, encode_allocation({{1}}, 1), {0.0, 0.0}, rng);
    ++t;
    if (out.done) success = out.success;
  }
  CHECK(t == want);
  CHECK(success);
  CHECK(s.u_res(0) == 0.0);
}

TEST_CASE("conservation and monotone residuals over random episodes") {
  EnvConfig c = small_cfg(3, 2);
  c.data_size_bits = 1e7;
  c.mdc_positions = {{20.0, 30.0}, {35.0, 40.0}, {60.0, 55.0}};
  Environment e(c);
  Rng rng(21);
  const double total = c.n_mdcs * c.data_size_bits;
  for (int ep = 0; ep < 20; ++ep) {
    EnvState s = e.reset(rng);
    double collected = 0.0;
    Eigen::VectorXd prev = s.u_res;
    int len = 0;
    while (!e.is_terminal(s)) {
      AllocationAction a = rng.uniform_int(c.n_actions());
      StepOutcome out = e.step(
          s, a, {rng.uniform(-6.0, 6.0), rng.uniform(-6.0, 6.0)}, rng);
      collected += out.collected_bits.sum();
      CHECK((s.u_res.array() <= prev.array() + 1e-9).all());
      CHECK((s.u_res.array() >= 0.0).all());
      prev = s.u_res;
      ++len;
    }
    CHECK(len <= c.t_max + 1);
    CHECK(std::abs(collected + s.u_res.sum() - total) <= 1e-6 * total);
  }
}

TEST_CASE("state vectors") {
  EnvConfig c = small_cfg();
  Environment e(c);
  Rng rng(13);
  EnvState s = e.reset(rng);

  Eigen::VectorXd sd = e.state_vector_discrete(s);
  REQUIRE(sd.size() == c.discrete_state_dim());
  CHECK((sd.head(c.n_mdcs).array() == 1.0).all());
  CHECK(sd == e.state_vector_discrete(s));  // pure

  s.u_res(1) = 0.0;
  sd = e.state_vector_discrete(s);
  CHECK(sd(1) == 0.0);

  Eigen::VectorXd sc = e.state_vector_continuous(s);
  REQUIRE(sc.size() == c.continuous_state_dim());
  CHECK(sc.head(sd.size()) == sd);

  s.uav_xy = {0.0, 0.0};
  sc = e.state_vector_continuous(s);
  CHECK(sc(sc.size() - 2) == 0.0);
  CHECK(sc(sc.size() - 1) == 0.0);
  s.uav_xy = {c.area_m, c.area_m};
  sc = e.state_vector_continuous(s);
  CHECK(sc(sc.size() - 2) == 1.0);
  CHECK(sc(sc.size() - 1) == 1.0);
  s.uav_xy = {c.area_m / 2, c.area_m / 2};
  sc = e.state_vector_continuous(s);
  CHECK(sc(sc.size() - 2) == doctest::Approx(0.5));

  // gain features stay O(1) near the geometry the normalizer was built from
  s.uav_xy = c.mdc_positions[0];
  sd = e.state_vector_discrete(s);
  CHECK(sd.tail(c.n_mdcs * c.n_channels).cwiseAbs().maxCoeff() < 10.0);
}
