#include "dockrl/eval.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dockrl {

namespace {

constexpr double kRadToDeg = 180.0 / M_PI;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char* outcome_name(StepOutcome o) {
  switch (o) {
    case StepOutcome::reached_goal: return "reached_goal";
    case StepOutcome::markers_lost: return "markers_lost";
    case StepOutcome::timed_out: return "timed_out";
    default: return "running";
  }
}

StepOutcome outcome_from_name(const std::string& s) {
  if (s == "reached_goal") return StepOutcome::reached_goal;
  if (s == "markers_lost") return StepOutcome::markers_lost;
  if (s == "timed_out") return StepOutcome::timed_out;
  if (s == "running") return StepOutcome::running;
  throw std::runtime_error("results.csv: unknown outcome '" + s + "'");
}

}  // namespace

std::vector<EvalCase> enumerate_grid(const EvalGrid& grid) {
  std::vector<EvalCase> cases;
  int run_id = 0;
  for (double x : grid.xs) {
    for (double y : grid.ys) {
      for (double t : grid.thetas_deg) {
        for (int r = 0; r < grid.repeats; ++r) {
          cases.push_back({run_id++, x, y, t, r});
        }
      }
    }
  }
  return cases;
}

GridRunData run_grid(const QNetworkParams& policy, const EvalGrid& grid,
                     const AppConfig& cfg, const DetectorNoise& noise,
                     uint64_t seed) {
  GridRunData data;
  const PhaseConfig final_phase = cfg.phases.back();
  for (const EvalCase& c : enumerate_grid(grid)) {
    DockingEnv env(cfg.sim, cfg.cam, cfg.layout, noise, cfg.episode,
                   cfg.actions);
    env.set_phase(final_phase);
    std::mt19937_64 rng(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL *
                                           (static_cast<uint64_t>(c.run_id) + 1))));
    const Pose start{c.x0, c.y0, c.theta0_deg / kRadToDeg};
    ObservationStack state = env.reset_to(start, rng);
    StepResult sr;
    while (!env.done()) {
      const int action =
          argmax_action(policy, state.flatten(), cfg.actions, cfg.sim);
      sr = env.step(action, rng);
      state = sr.state;
    }

    EvalResult r;
    r.initial = c;
    r.outcome = sr.outcome;
    r.steps = env.steps_taken();
    r.final_x_cm = env.pose().x * 100.0;
    r.final_y_cm = (env.pose().y - cfg.sim.y_goal) * 100.0;
    r.final_theta_deg = env.pose().theta * kRadToDeg;
    data.results.push_back(r);
    data.traces.push_back({c.run_id, env.trace()});
  }
  return data;
}

namespace {

DimensionStats stats_of(const std::vector<double>& errors) {
  DimensionStats s;
  double sum_abs = 0.0, sum_sq = 0.0;
  for (double e : errors) {
    const double a = std::abs(e);
    s.max_ae = std::max(s.max_ae, a);
    sum_abs += a;
    sum_sq += e * e;
  }
  s.mae = sum_abs / errors.size();
  s.rmse = std::sqrt(sum_sq / errors.size());
  const double slack = 1e-12 * std::max(1.0, s.max_ae);
  if (s.mae > s.rmse + slack || s.rmse > s.max_ae + slack) {
    throw std::logic_error("summarize: MAE <= RMSE <= MaxAE violated");
  }
  return s;
}

}  // namespace

MetricsSummary summarize(const std::vector<EvalResult>& results) {
  if (results.empty()) {
    throw std::invalid_argument("summarize: no results");
  }
  std::vector<double> ex, ey, et;
  MetricsSummary m;
  m.runs_total = static_cast<int>(results.size());
  for (const auto& r : results) {
    if (r.outcome != StepOutcome::reached_goal) continue;
    ex.push_back(r.final_x_cm);
    ey.push_back(r.final_y_cm);
    et.push_back(r.final_theta_deg);
  }
  m.runs_reached_goal = static_cast<int>(ex.size());
  if (ex.empty()) {
    throw std::invalid_argument("summarize: no run reached the stop line");
  }
  m.x_cm = stats_of(ex);
  m.y_cm = stats_of(ey);
  m.theta_deg = stats_of(et);
  return m;
}

const std::array<DimensionStats, 3> kHardwareReference = {{
    {3.800, 0.822, 0.896},  // X offset, cm
    {3.642, 0.934, 1.182},  // Y offset, cm
    {6.200, 1.533, 1.661},  // theta offset, deg
}};

std::string format_summary(const MetricsSummary& summary) {
  char buf[192];
  std::string out;
  auto row = [&](const char* label, double x, double y, double t) {
    std::snprintf(buf, sizeof(buf), "%-16s %14.3f %14.3f %16.3f\n", label, x, y, t);
    out += buf;
  };
  std::snprintf(buf, sizeof(buf), "%-16s %14s %14s %16s\n", "Error Measure",
                "X Offset (cm)", "Y Offset (cm)", "Theta Offset (deg)");
  out += buf;
  row("Max Abs. Error", summary.x_cm.max_ae, summary.y_cm.max_ae,
      summary.theta_deg.max_ae);
  row("Mean Abs. Error", summary.x_cm.mae, summary.y_cm.mae,
      summary.theta_deg.mae);
  row("RMSE", summary.x_cm.rmse, summary.y_cm.rmse, summary.theta_deg.rmse);
  std::snprintf(buf, sizeof(buf), "\nruns: %d, reached stop line: %d\n",
                summary.runs_total, summary.runs_reached_goal);
  out += buf;
  out += "\nHardware reference (field tests of the original controller):\n";
  row("Max Abs. Error", kHardwareReference[0].max_ae, kHardwareReference[1].max_ae,
      kHardwareReference[2].max_ae);
  row("Mean Abs. Error", kHardwareReference[0].mae, kHardwareReference[1].mae,
      kHardwareReference[2].mae);
  row("RMSE", kHardwareReference[0].rmse, kHardwareReference[1].rmse,
      kHardwareReference[2].rmse);
  return out;
}

void write_report(const MetricsSummary& summary, const GridRunData& data,
                  const std::string& out_dir) {
  {
    const std::string path = out_dir + "/results.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open " + path);
    out << "run,init_x_m,init_y_m,init_theta_deg,repeat,outcome,steps,"
           "final_x_cm,final_y_cm,final_theta_deg\n";
    char buf[256];
    for (const auto& r : data.results) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d,%s,%d,%.17g,%.17g,%.17g\n",
                    r.initial.run_id, r.initial.x0, r.initial.y0,
                    r.initial.theta0_deg, r.initial.repeat,
                    outcome_name(r.outcome), r.steps, r.final_x_cm,
                    r.final_y_cm, r.final_theta_deg);
      out << buf;
    }
    if (!out) throw std::runtime_error("write_report: write failed for " + path);
  }
  {
    const std::string path = out_dir + "/summary.txt";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open " + path);
    out << format_summary(summary);
    if (!out) throw std::runtime_error("write_report: write failed for " + path);
  }
  {
    const std::string path = out_dir + "/trajectories.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report: cannot open " + path);
    out << "run,step,x_m,y_m,theta_deg,action,reward,u1,v1,u2,v2\n";
    char buf[320];
    for (const auto& trace : data.traces) {
      for (const auto& row : trace.rows) {
        std::snprintf(buf, sizeof(buf),
                      "%d,%d,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      trace.run_id, row.step, row.pose.x, row.pose.y,
                      row.pose.theta * kRadToDeg, row.action_id, row.reward,
                      row.obs.u1, row.obs.v1, row.obs.u2, row.obs.v2);
        out << buf;
      }
    }
    if (!out) throw std::runtime_error("write_report: write failed for " + path);
  }
}

std::vector<EvalResult> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_results_csv: cannot open " + path);
  std::vector<EvalResult> results;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_results_csv: empty file " + path);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 10) {
      throw std::runtime_error("read_results_csv: bad row in " + path);
    }
    EvalResult r;
    r.initial.run_id = std::stoi(fields[0]);
    r.initial.x0 = std::strtod(fields[1].c_str(), nullptr);
    r.initial.y0 = std::strtod(fields[2].c_str(), nullptr);
    r.initial.theta0_deg = std::strtod(fields[3].c_str(), nullptr);
    r.initial.repeat = std::stoi(fields[4]);
    r.outcome = outcome_from_name(fields[5]);
    r.steps = std::stoi(fields[6]);
    r.final_x_cm = std::strtod(fields[7].c_str(), nullptr);
    r.final_y_cm = std::strtod(fields[8].c_str(), nullptr);
    r.final_theta_deg = std::strtod(fields[9].c_str(), nullptr);
    results.push_back(r);
  }
  return results;
}

}  // namespace dockrl
