#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clbench/controller.hpp"
#include "clbench/estimator.hpp"
#include "clbench/metrics.hpp"
#include "clbench/presets.hpp"
#include "clbench/vehicle.hpp"

namespace clbench {

// Which pose feeds the controller (the feedback switch): the estimator
// output (closed) or ground truth (open). The estimator runs passively
// in open mode so it can still be scored.
enum class LoopMode { closed, open };

struct Rates {
  double control = 50.0;  // Hz
  double imu = 200.0;     // Hz
  double camera = 30.0;   // Hz
};

struct RunConfig {
  std::string scenario = "s1";
  double v_des = 1.0;
  std::string estimator = "gf-like";  // preset name
  std::string imu = "adis16448";      // preset name
  FlatGains flat_gains;
  TrackingGains tracking_gains;
  VehicleLimits vehicle_limits;
  TrajLimits traj_limits;
  std::uint64_t seed = 0;
  double warmup = 10.0;  // s, robot static, estimator running
  double tail = 5.0;     // s past the desired duration, to settle
  Rates rates;
  LoopMode loop_mode = LoopMode::closed;
  // When set, used instead of resolving `estimator` from the library
  // (sweeps mutate a resolved config).
  std::optional<EstimatorConfig> estimator_override;
};

struct RunResult {
  RunConfig config;
  EstimatorConfig estimator;  // resolved, echoed for provenance
  ImuModel imu;
  TimedPath desired;    // d*(t) with tangent heading, trajectory clock
  TimedPath actual;     // ground-truth vehicle path
  TimedPath estimated;  // estimator output path
  MetricReport metrics;
  double latency_mean = 0.0;
  double latency_p95 = 0.0;
  long saturation_count = 0;
  long dropped_fixes = 0;
  double sim_duration = 0.0;  // s, excluding warmup
};

RunResult run_case(const RunConfig& cfg, const Library& lib);

// ---- suite -------------------------------------------------------------

struct SuiteSpec {
  std::vector<std::string> scenarios = {"s1", "s2", "m1", "m2", "l1", "l2"};
  std::vector<double> speeds = {0.5, 1.0, 1.5};
  std::vector<std::string> estimators = {"svo-like", "msc-like", "gf-like",
                                         "orb-like", "vins-like"};
  std::vector<std::string> imus = {"adis16448", "mpu6000"};
  int repeats = 5;
  RunConfig base;  // seed, gains, rates, loop mode shared by all runs
};

struct CellStats {
  double mean_rmse = 0.0;  // over non-failed repeats
  int n_ok = 0;
  int n_runs = 0;
  bool failed = false;  // mean over all repeats above threshold, or all failed
};

// Aggregation rule for one table cell; failed repeats are excluded from
// the reported mean.
CellStats aggregate_cell(const std::vector<double>& rmses);

struct SuiteRunRecord {
  std::string scenario;
  double speed = 0.0;
  std::string estimator;
  std::string imu;
  int repeat = 0;
  std::uint64_t seed = 0;
  double rmse = 0.0;
  double rmse_yaw = 0.0;
  double max_err = 0.0;
  double latency_mean = 0.0;
  long dropped_fixes = 0;
  bool failed = false;
};

struct SuiteCell {
  std::string scenario;
  double speed = 0.0;
  std::string estimator;
  std::string imu;
  CellStats stats;
  double avg_latency = 0.0;  // over all repeats
};

struct ResultTable {
  std::vector<SuiteCell> cells;  // deterministic run-matrix order
  int repeats = 0;
};

struct SuiteResult {
  SuiteSpec spec;
  ResultTable table;
  std::vector<SuiteRunRecord> runs;
};

// Progress callback (run index, total); may be null.
using ProgressFn = void (*)(std::size_t, std::size_t);

SuiteResult run_suite(const SuiteSpec& spec, const Library& lib,
                      ProgressFn progress = nullptr);

// ---- sweep -------------------------------------------------------------

enum class SweepAxis { latency, drift_rate_trans };

struct SweepPoint {
  double value = 0.0;
  double mean_rmse = 0.0;
  double stderr_rmse = 0.0;
  std::vector<double> rmses;  // per seed
};

// One run per (value, seed); the same seed list is shared across values
// so curves are paired.
std::vector<SweepPoint> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int n_seeds,
                              const Library& lib);

}  // namespace clbench
