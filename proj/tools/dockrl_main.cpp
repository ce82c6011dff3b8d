#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "dockrl/config.hpp"
#include "dockrl/dqn.hpp"
#include "dockrl/eval.hpp"
#include "dockrl/net.hpp"

namespace {

struct SimOverrides {
  std::optional<double> dt, y_goal, v_max, omega_max_deg;
};

void add_sim_flags(CLI::App* cmd, SimOverrides& ov) {
  cmd->add_option("--dt", ov.dt, "control period in seconds");
  cmd->add_option("--y-goal", ov.y_goal, "stop line in meters");
  cmd->add_option("--v-max", ov.v_max, "velocity bound in m/s");
  cmd->add_option("--omega-max", ov.omega_max_deg, "heading rate bound in deg/s");
}

dockrl::AppConfig make_config(const std::string& config_path,
                              const SimOverrides& ov) {
  dockrl::AppConfig cfg;
  if (!config_path.empty()) cfg = dockrl::load_config(config_path);
  if (ov.dt) dockrl::apply_config_entry(cfg, "dt", std::to_string(*ov.dt));
  if (ov.y_goal) dockrl::apply_config_entry(cfg, "y_goal", std::to_string(*ov.y_goal));
  if (ov.v_max) dockrl::apply_config_entry(cfg, "v_max", std::to_string(*ov.v_max));
  if (ov.omega_max_deg) {
    dockrl::apply_config_entry(cfg, "omega_max_deg", std::to_string(*ov.omega_max_deg));
  }
  return cfg;
}

int cmd_train(const std::string& config_path, const SimOverrides& ov,
              std::optional<uint64_t> seed, const std::string& out_dir) {
  dockrl::AppConfig cfg = make_config(config_path, ov);
  if (seed) cfg.trainer.seed = *seed;
  std::filesystem::create_directories(out_dir);

  dockrl::DockingEnv env(cfg.sim, cfg.cam, cfg.layout, cfg.noise, cfg.episode,
                         cfg.actions);
  std::mt19937_64 rng(cfg.trainer.seed);
  std::cerr << "training with seed " << cfg.trainer.seed << "\n";
  const dockrl::CurriculumResult result =
      dockrl::run_curriculum(cfg.trainer, cfg.phases, env, rng, &std::cerr);

  dockrl::write_training_log(result.log, out_dir + "/training_log.csv");
  for (size_t i = 0; i < result.phase_checkpoints.size(); ++i) {
    dockrl::save_checkpoint(result.phase_checkpoints[i],
                            out_dir + "/checkpoint_phase" + std::to_string(i + 1) + ".qnet");
  }
  if (!result.completed) {
    std::cerr << "training aborted: " << result.abort_reason << "\n"
              << "log written to " << out_dir << "/training_log.csv\n";
    return 1;
  }
  dockrl::save_checkpoint(result.params, out_dir + "/checkpoint_final.qnet");
  std::cerr << "training complete; " << result.log.size()
            << " episodes; checkpoints in " << out_dir << "\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& config_path,
             const SimOverrides& ov, double noise_px,
             std::optional<uint64_t> seed, const std::string& out_dir) {
  dockrl::AppConfig cfg = make_config(config_path, ov);
  const uint64_t eval_seed = seed.value_or(cfg.trainer.seed);
  std::filesystem::create_directories(out_dir);

  const dockrl::QNetworkParams policy = dockrl::load_checkpoint(checkpoint);
  dockrl::DetectorNoise noise = cfg.noise;
  noise.sigma_px = noise_px;
  if (noise_px == 0.0 && noise.dropout_prob == 0.0) {
    std::cerr << "note: zero detector noise, the two repeats of each "
                 "configuration are identical (45 unique runs)\n";
  }

  dockrl::EvalGrid grid;
  const dockrl::GridRunData data =
      dockrl::run_grid(policy, grid, cfg, noise, eval_seed);
  const dockrl::MetricsSummary summary = dockrl::summarize(data.results);
  dockrl::write_report(summary, data, out_dir);
  std::cout << dockrl::format_summary(summary);

  const bool all_ok = summary.runs_reached_goal == summary.runs_total;
  if (!all_ok) {
    std::cerr << (summary.runs_total - summary.runs_reached_goal)
              << " run(s) did not reach the stop line\n";
  }
  return all_ok ? 0 : 1;
}

int cmd_render(const std::string& pose_str, const std::string& config_path,
               const SimOverrides& ov, const std::string& out_path) {
  dockrl::AppConfig cfg = make_config(config_path, ov);
  dockrl::Pose pose;
  if (std::sscanf(pose_str.c_str(), "%lf,%lf,%lf", &pose.x, &pose.y,
                  &pose.theta) != 3) {
    std::cerr << "expected --pose x,y,theta_deg\n";
    return 2;
  }
  pose.theta *= M_PI / 180.0;
  dockrl::render_ppm(pose, cfg.layout, cfg.cam, out_path);
  std::cerr << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vision-guided docking: simulator, trainer and evaluation harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", checkpoint, pose_str, ppm_path = "frame.ppm";
  std::optional<uint64_t> seed;
  double noise_px = 1.0;
  SimOverrides ov;

  CLI::App* train = app.add_subcommand("train", "train the docking policy through the curriculum");
  train->add_option("--config", config_path, "key = value config file");
  train->add_option("--seed", seed, "training seed (overrides config)");
  train->add_option("--out", out_dir, "output directory");
  add_sim_flags(train, ov);

  CLI::App* eval = app.add_subcommand("eval", "run the 90-configuration evaluation grid");
  eval->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
  eval->add_option("--config", config_path, "key = value config file");
  eval->add_option("--noise", noise_px, "detector jitter sigma in pixels");
  eval->add_option("--seed", seed, "evaluation seed");
  eval->add_option("--out", out_dir, "output directory");
  add_sim_flags(eval, ov);

  CLI::App* render = app.add_subcommand("render", "write a PPM frame of the simulated camera view");
  render->add_option("--pose", pose_str, "mower pose as x,y,theta_deg")->required();
  render->add_option("--config", config_path, "key = value config file");
  render->add_option("--out", ppm_path, "output PPM path");
  add_sim_flags(render, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, ov, seed, out_dir);
    if (eval->parsed()) return cmd_eval(checkpoint, config_path, ov, noise_px, seed, out_dir);
    if (render->parsed()) return cmd_render(pose_str, config_path, ov, ppm_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
