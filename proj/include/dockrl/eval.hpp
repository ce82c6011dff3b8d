#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dockrl/config.hpp"
#include "dockrl/env.hpp"
#include "dockrl/net.hpp"

namespace dockrl {

// The 3 x 3 x 5 grid of initial conditions, each run `repeats` times.
struct EvalGrid {
  std::vector<double> xs = {-0.2, 0.0, 0.2};            // m
  std::vector<double> ys = {-0.2, 0.0, 0.2};            // m
  std::vector<double> thetas_deg = {-30, -15, 0, 15, 30};
  int repeats = 2;
};

struct EvalCase {
  int run_id = 0;
  double x0 = 0.0, y0 = 0.0, theta0_deg = 0.0;
  int repeat = 0;
};

// Row order: x ascending, then y, then theta, then repeat.
std::vector<EvalCase> enumerate_grid(const EvalGrid& grid);

struct EvalResult {
  EvalCase initial;
  StepOutcome outcome = StepOutcome::running;
  int steps = 0;
  double final_x_cm = 0.0;      // lateral offset at stop
  double final_y_cm = 0.0;      // overshoot past the stop line at stop
  double final_theta_deg = 0.0; // heading offset at stop
};

struct RunTrace {
  int run_id = 0;
  std::vector<TraceRow> rows;
};

struct GridRunData {
  std::vector<EvalResult> results;
  std::vector<RunTrace> traces;
};

// Runs every grid case with the greedy policy (eps = 0). Each run draws its
// detector noise from an independent stream derived from (seed, run_id), so
// repeats differ only through that noise and zero-noise repeats are
// identical. Failed runs (timeout, markers lost) are recorded, not dropped.
GridRunData run_grid(const QNetworkParams& policy, const EvalGrid& grid,
                     const AppConfig& cfg, const DetectorNoise& noise,
                     uint64_t seed);

struct DimensionStats {
  double max_ae = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
};

struct MetricsSummary {
  DimensionStats x_cm;
  DimensionStats y_cm;
  DimensionStats theta_deg;
  int runs_total = 0;
  int runs_reached_goal = 0;
};

// Final-offset statistics over the runs that reached the stop line. Throws
// std::invalid_argument when no run did, std::logic_error if the
// MAE <= RMSE <= MaxAE ordering is ever violated.
MetricsSummary summarize(const std::vector<EvalResult>& results);

// Reference offsets measured on the mower hardware, for the side-by-side
// row in summary.txt: {max abs error, MAE, RMSE} for X (cm), Y (cm),
// theta (deg). Context only, never a pass/fail target.
extern const std::array<DimensionStats, 3> kHardwareReference;

// Renders summary.txt's content.
std::string format_summary(const MetricsSummary& summary);

// Writes results.csv, summary.txt and trajectories.csv into out_dir (which
// must exist). Throws std::runtime_error with the failing path on IO errors.
void write_report(const MetricsSummary& summary, const GridRunData& data,
                  const std::string& out_dir);

// Reads back a results.csv written by write_report (used for the
// re-summarize self-check).
std::vector<EvalResult> read_results_csv(const std::string& path);

}  // namespace dockrl
