#include <doctest.h>

#include <cmath>
#include <random>

#include "dockrl/env.hpp"

using namespace dockrl;

namespace {

DockingEnv make_env(DetectorNoise noise = {0.0, 0.0}) {
  return DockingEnv(SimConfig{}, CameraModel{}, MarkerLayout{}, noise,
                    EpisodeConfig{}, default_action_table());
}

std::pair<double, double> anchors() {
  return goal_anchor_values(MarkerLayout{}, CameraModel{}, SimConfig{});
}

}  // namespace

TEST_CASE("curriculum phase constants") {
  const auto phases = default_phases();
  CHECK(phases[0].c1 == 0.05); CHECK(phases[0].c2 == 2.0);  CHECK(phases[0].R == 0.0);
  CHECK(phases[1].c1 == 0.05); CHECK(phases[1].c2 == 5.0);  CHECK(phases[1].R == 150.0);
  CHECK(phases[2].c1 == 0.02); CHECK(phases[2].c2 == 5.0);  CHECK(phases[2].R == 150.0);
  CHECK(phases[3].c1 == 0.02); CHECK(phases[3].c2 == 10.0); CHECK(phases[3].R == 150.0);
  for (int i = 0; i < 4; ++i) CHECK(phases[i].phase_index == i + 1);
}

TEST_CASE("default action table spans the bounds") {
  const SimConfig sim;
  const ActionTable t = default_action_table();
  REQUIRE(t.size() == 9);
  CHECK(t[0].v == 0.1);
  CHECK(t[0].omega == doctest::Approx(-15.0 * M_PI / 180.0));
  CHECK(t[4].v == 0.25);
  CHECK(t[4].omega == 0.0);
  CHECK(t[8].v == 0.4);
  CHECK(t[8].omega == doctest::Approx(15.0 * M_PI / 180.0));
  for (const auto& a : t) {
    CHECK(a.v >= 0.0);
    CHECK(a.v <= sim.v_max);
    CHECK(std::abs(a.omega) <= sim.omega_max + 1e-12);
  }
}

TEST_CASE("reward branches: hand-evaluated cases for every phase") {
  const auto [v1_0, v2_0] = anchors();
  const auto phases = default_phases();
  const Pose before{0.0, 0.5, 0.0};
  const Pose at_goal{0.0, 1.0, 0.0};

  MarkerObservation obs;
  obs.in_view1 = obs.in_view2 = true;

  SUBCASE("perfect alignment mid-approach scores zero penalty") {
    obs.u1 = obs.u2 = 0.0;
    obs.v1 = v1_0;
    obs.v2 = v2_0;
    for (const auto& phase : phases) {
      const RewardValue r = compute_reward(obs, before, phase, {v1_0, v2_0}, 1.0);
      CHECK(r.branch == RewardBranch::penalty);
      CHECK(r.value == 0.0);
    }
  }

  SUBCASE("penalty arithmetic, phase 2") {
    obs.u1 = 0.1;
    obs.u2 = -0.05;
    obs.v1 = v1_0 + 0.03;
    obs.v2 = v2_0 - 0.02;
    const RewardValue r = compute_reward(obs, before, phases[1], {v1_0, v2_0}, 1.0);
    CHECK(r.branch == RewardBranch::penalty);
    CHECK(r.value == doctest::Approx(-1.25).epsilon(1e-12));
  }

  SUBCASE("success band per phase") {
    obs.v1 = v1_0;
    obs.v2 = v2_0;
    obs.u1 = obs.u2 = 0.019;  // < c1 for all phases
    for (const auto& phase : phases) {
      const RewardValue r = compute_reward(obs, at_goal, phase, {v1_0, v2_0}, 1.0);
      CHECK(r.branch == RewardBranch::success);
      CHECK(r.value == phase.R);
    }
    CHECK(compute_reward(obs, at_goal, phases[0], {v1_0, v2_0}, 1.0).value == 0.0);
    CHECK(compute_reward(obs, at_goal, phases[3], {v1_0, v2_0}, 1.0).value == 150.0);
  }

  SUBCASE("middle band: inside 2*c1 but outside c1") {
    obs.v1 = v1_0;
    obs.v2 = v2_0;
    obs.u1 = 0.03;  // phase 3: 0.02 <= 0.03 < 0.04
    obs.u2 = 0.0;
    const RewardValue r = compute_reward(obs, at_goal, phases[2], {v1_0, v2_0}, 1.0);
    CHECK(r.branch == RewardBranch::near_miss);
    CHECK(r.value == 0.0);
  }

  SUBCASE("outside twice the band falls to the penalty branch") {
    obs.v1 = v1_0;
    obs.v2 = v2_0;
    obs.u1 = 0.05;
    obs.u2 = 0.0;
    const RewardValue r = compute_reward(obs, at_goal, phases[2], {v1_0, v2_0}, 1.0);
    CHECK(r.branch == RewardBranch::penalty);
    CHECK(r.value == doctest::Approx(-(5.0 * 0.05)).epsilon(1e-12));
  }

  SUBCASE("one marker inside c1, the other only inside 2*c1") {
    obs.v1 = v1_0;
    obs.v2 = v2_0;
    obs.u1 = 0.01;
    obs.u2 = 0.03;  // blocks success for phase 3, still inside 2*c1
    const RewardValue r = compute_reward(obs, at_goal, phases[2], {v1_0, v2_0}, 1.0);
    CHECK(r.branch == RewardBranch::near_miss);
    CHECK(r.value == 0.0);
  }
}

TEST_CASE("reward branch partition and sign properties") {
  const auto [v1_0, v2_0] = anchors();
  const auto phases = default_phases();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> y(-0.3, 1.3);
  for (int i = 0; i < 2000; ++i) {
    MarkerObservation obs;
    obs.u1 = u(rng);
    obs.u2 = u(rng);
    obs.v1 = u(rng);
    obs.v2 = u(rng);
    const Pose pose{0.0, y(rng), 0.0};
    for (const auto& phase : phases) {
      const RewardValue r = compute_reward(obs, pose, phase, {v1_0, v2_0}, 1.0);
      switch (r.branch) {
        case RewardBranch::success:
          CHECK(pose.y >= 1.0);
          CHECK(r.value == phase.R);
          CHECK(r.value >= 0.0);
          break;
        case RewardBranch::near_miss:
          CHECK(pose.y >= 1.0);
          CHECK(r.value == 0.0);
          break;
        case RewardBranch::penalty:
          CHECK(r.value <= 0.0);
          break;
      }
      // swapping marker labels together with anchors leaves the value fixed
      MarkerObservation swapped;
      swapped.u1 = obs.u2;
      swapped.v1 = obs.v2;
      swapped.u2 = obs.u1;
      swapped.v2 = obs.v1;
      const RewardValue rs = compute_reward(swapped, pose, phase, {v2_0, v1_0}, 1.0);
      CHECK(rs.value == doctest::Approx(r.value).epsilon(1e-12));
      CHECK(rs.branch == r.branch);
    }
  }
}

TEST_CASE("phase_advance compares the window mean to the threshold") {
  CHECK(phase_advance(120.0, 100.0));
  CHECK_FALSE(phase_advance(99.9, 100.0));
  CHECK_FALSE(phase_advance(100.0, 100.0));
}

TEST_CASE("reset is deterministic given the rng state") {
  DockingEnv env = make_env();
  std::mt19937_64 a(42), b(42);
  env.reset(a);
  const Pose pa = env.pose();
  env.reset(b);
  const Pose pb = env.pose();
  CHECK(pa.x == pb.x);
  CHECK(pa.y == pb.y);
  CHECK(pa.theta == pb.theta);
}

TEST_CASE("reset fills the stack with the initial observation") {
  DockingEnv env = make_env();
  std::mt19937_64 rng(1);
  const ObservationStack s = env.reset(rng);
  const auto flat = s.flatten();
  for (int i = 0; i < 12; ++i) {
    CHECK(flat[i] == flat[i % 4]);
  }
}

TEST_CASE("reset sampling matches the uniform ranges") {
  DockingEnv env = make_env();
  std::mt19937_64 rng(99);
  const int n = 10000;
  double sum_x = 0.0, sum_y = 0.0, sum_t = 0.0;
  double max_x = -1.0, max_t = -1.0;
  for (int i = 0; i < n; ++i) {
    env.reset(rng);
    sum_x += env.pose().x;
    sum_y += env.pose().y;
    sum_t += env.pose().theta;
    max_x = std::max(max_x, std::abs(env.pose().x));
    max_t = std::max(max_t, std::abs(env.pose().theta));
  }
  // sd of the mean of U(-a, a) is (2a / sqrt(12)) / sqrt(n)
  CHECK(std::abs(sum_x / n) < 3.0 * (0.4 / std::sqrt(12.0)) / std::sqrt(double(n)));
  CHECK(std::abs(sum_y / n) < 3.0 * (0.4 / std::sqrt(12.0)) / std::sqrt(double(n)));
  CHECK(std::abs(sum_t / n) <
        3.0 * (2 * 30.0 * M_PI / 180.0 / std::sqrt(12.0)) / std::sqrt(double(n)));
  CHECK(max_x <= 0.2);
  CHECK(max_t <= 30.0 * M_PI / 180.0);
}

TEST_CASE("step shifts the stack and counts steps") {
  DockingEnv env = make_env();
  env.set_phase(default_phases()[0]);
  std::mt19937_64 rng(7);
  const ObservationStack s0 = env.reset(rng);
  const StepResult r1 = env.step(4, rng);
  CHECK(r1.state.frames[0].u1 == s0.frames[1].u1);
  CHECK(r1.state.frames[1].u1 == s0.frames[2].u1);
  CHECK(env.steps_taken() == 1);
  const StepResult r2 = env.step(4, rng);
  CHECK(r2.state.frames[0].u1 == r1.state.frames[1].u1);
  CHECK(r2.state.frames[1].u1 == r1.state.frames[2].u1);
}

TEST_CASE("reaching the stop line aligned pays the phase reward") {
  for (int phase_idx : {0, 3}) {
    DockingEnv env = make_env();
    env.set_phase(default_phases()[phase_idx]);
    std::mt19937_64 rng(3);
    env.reset_to({0.0, 0.9, 0.0}, rng);
    StepResult r;
    while (!env.done()) r = env.step(7, rng);  // v = 0.4, omega = 0
    CHECK(r.outcome == StepOutcome::reached_goal);
    CHECK(r.branch == RewardBranch::success);
    CHECK(r.reward == default_phases()[phase_idx].R);
    CHECK(env.pose().y >= 1.0);
  }
}

TEST_CASE("step after done is a usage error, bad ids rejected") {
  DockingEnv env = make_env();
  env.set_phase(default_phases()[0]);
  std::mt19937_64 rng(5);
  env.reset_to({0.0, 0.99, 0.0}, rng);
  CHECK_THROWS_AS(env.step(99, rng), std::out_of_range);
  CHECK_THROWS_AS(env.step(-1, rng), std::out_of_range);
  const StepResult r = env.step(7, rng);
  CHECK(r.done);
  CHECK_THROWS_AS(env.step(7, rng), std::logic_error);
}

TEST_CASE("episodes cannot exceed max_steps") {
  EpisodeConfig episode;
  episode.max_steps = 25;
  DockingEnv env(SimConfig{}, CameraModel{}, MarkerLayout{}, DetectorNoise{},
                 episode, default_action_table());
  env.set_phase(default_phases()[0]);
  std::mt19937_64 rng(13);
  env.reset_to({0.0, 0.0, 0.0}, rng);
  StepResult r;
  int steps = 0;
  while (!env.done()) {
    r = env.step(0, rng);  // slow tight turn, never reaches the line
    ++steps;
    REQUIRE(steps <= episode.max_steps);
  }
  CHECK(steps == episode.max_steps);
  CHECK(r.outcome == StepOutcome::timed_out);
}

TEST_CASE("losing both markers terminates the episode") {
  DockingEnv env = make_env({0.0, 1.0});  // every detection dropped
  env.set_phase(default_phases()[0]);
  std::mt19937_64 rng(21);
  env.reset_to({0.0, 0.0, 0.0}, rng);
  const StepResult r = env.step(7, rng);
  CHECK(r.done);
  CHECK(r.outcome == StepOutcome::markers_lost);
  CHECK(r.branch == RewardBranch::penalty);
}

TEST_CASE("a lost marker repeats its last center") {
  DockingEnv env = make_env({0.0, 1.0});
  env.set_phase(default_phases()[0]);
  std::mt19937_64 rng(31);
  const ObservationStack s0 = env.reset_to({0.05, 0.2, 0.1}, rng);
  const StepResult r = env.step(7, rng);
  CHECK(r.state.frames[2].u1 == s0.frames[2].u1);
  CHECK(r.state.frames[2].v1 == s0.frames[2].v1);
  CHECK(r.state.frames[2].u2 == s0.frames[2].u2);
  CHECK(r.state.frames[2].v2 == s0.frames[2].v2);
}

TEST_CASE("out-of-view initial pose raises after bounded retries") {
  EpisodeConfig episode;
  episode.x_range = 500.0;  // nearly every draw lands far outside the view
  episode.y_range = 0.01;
  episode.theta_range = 0.01;
  episode.reset_retries = 20;
  DockingEnv env(SimConfig{}, CameraModel{}, MarkerLayout{}, DetectorNoise{},
                 episode, default_action_table());
  std::mt19937_64 rng(2);
  CHECK_THROWS_AS(env.reset(rng), std::runtime_error);
}

TEST_CASE("env rejects actions outside the configured bounds") {
  ActionTable bad = default_action_table();
  bad.push_back({5.0, 0.0});
  CHECK_THROWS_AS(DockingEnv(SimConfig{}, CameraModel{}, MarkerLayout{},
                             DetectorNoise{}, EpisodeConfig{}, bad),
                  std::invalid_argument);
}

TEST_CASE("episode trace records reset and steps") {
  DockingEnv env = make_env();
  env.set_phase(default_phases()[1]);
  std::mt19937_64 rng(17);
  env.reset_to({0.0, 0.5, 0.0}, rng);
  env.step(7, rng);
  env.step(7, rng);
  const auto& trace = env.trace();
  REQUIRE(trace.size() == 3);
  CHECK(trace[0].action_id == -1);
  CHECK(trace[1].action_id == 7);
  CHECK(trace[2].step == 2);
  CHECK(trace[2].pose.y > trace[1].pose.y);
}
