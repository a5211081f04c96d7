#include "clbench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "clbench/errors.hpp"
#include "clbench/rng.hpp"
#include "clbench/sensors.hpp"

namespace clbench {

RunResult run_case(const RunConfig& cfg, const Library& lib) {
  const WaypointList& wp = lib.scenario(cfg.scenario);
  const DesiredTrajectory traj =
      DesiredTrajectory::fit(wp, cfg.v_des, cfg.traj_limits);
  const Pose2 g0{wp.points.front().x, wp.points.front().y,
                 traj.heading_at(0.0)};

  ReferenceTrajectory ref;
  try {
    ref = generate_reference(traj, cfg.flat_gains, g0, cfg.rates.control,
                             cfg.tail);
  } catch (const IntegrationDiverged& e) {
    throw ReferenceGenFailed("scenario '" + cfg.scenario + "' at " +
                             std::to_string(cfg.v_des) + " m/s: " + e.what());
  }

  EstimatorConfig est_cfg =
      cfg.estimator_override ? *cfg.estimator_override
                             : lib.estimator(cfg.estimator);
  const ImuModel imu_model = lib.imu(cfg.imu);
  est_cfg.imu = imu_model;
  est_cfg.output_rate = cfg.rates.control;

  Estimator est(est_cfg);
  est.reset(g0, 0.0);
  std::mt19937_64 imu_rng = make_rng(cfg.seed, 1);
  std::mt19937_64 fix_rng = make_rng(cfg.seed, 2);
  ImuBias bias;

  const long imu_ms = std::lround(1000.0 / cfg.rates.imu);
  const long ctrl_ms = std::lround(1000.0 / cfg.rates.control);
  const double horizon = cfg.warmup + ref.duration();
  const long total_ms = std::llround(horizon * 1000.0);

  // The vehicle holds a constant twist between control ticks; truth at
  // intermediate event times is the exact twist flow from the anchor.
  VehicleState anchor{g0, {}, 0.0};
  auto truth_at = [&](double t) {
    return advance_twist(anchor.pose, anchor.vel.nu, anchor.vel.omega,
                         t - anchor.t);
  };

  long cam_idx = 0;
  auto cam_ms_at = [&](long n) {
    return std::llround(1000.0 * static_cast<double>(n) / cfg.rates.camera);
  };

  VehicleState prev_imu_state = anchor;
  std::deque<VisualFix> pending;
  double dist_cum = 0.0;
  double dist_last_fix = 0.0;
  std::vector<double> fix_latencies;
  long saturation = 0;

  RunResult res;

  for (long ms = 0; ms <= total_ms; ++ms) {
    const double t = static_cast<double>(ms) * 1e-3;

    // Event order at coincident ticks: IMU, camera, fix delivery, control.
    if (ms > 0 && ms % imu_ms == 0) {
      const VehicleState now{truth_at(t), anchor.vel, t};
      const ImuReading r =
          imu_sample(prev_imu_state, now, imu_model, bias, imu_rng);
      est.propagate(r, t - prev_imu_state.t);
      dist_cum += std::abs(anchor.vel.nu) * (t - prev_imu_state.t);
      prev_imu_state = now;
    }

    if (cam_ms_at(cam_idx) == ms) {
      ++cam_idx;
      const Pose2 tp = truth_at(t);
      const VisualFix fix = est.make_fix(tp, anchor.vel,
                                         dist_cum - dist_last_fix, t, fix_rng);
      dist_last_fix = dist_cum;
      pending.push_back(fix);
    }

    while (!pending.empty() && pending.front().t_available <= t + 1e-12) {
      const VisualFix fix = pending.front();
      pending.pop_front();
      est.correct(fix, t);
      fix_latencies.push_back(fix.t_available - fix.t_capture);
    }

    if (ms % ctrl_ms == 0) {
      const double t_traj = t - cfg.warmup;
      const Pose2 truth_pose = truth_at(t);
      BodyVelocity cmd;
      if (t_traj >= -1e-9) {
        const double tt = std::max(t_traj, 0.0);
        const ReferenceSample& rs = ref.at_time(tt);
        const Pose2 fb = (cfg.loop_mode == LoopMode::open)
                             ? truth_pose
                             : est.output(truth_pose);
        cmd = velocity_command(fb, rs.pose, rs.vel, cfg.tracking_gains);

        const TrajSample d = traj.eval(tt);
        res.desired.samples.push_back(
            {tt, {d.pos.x, d.pos.y, traj.heading_at(tt)}});
        res.actual.samples.push_back({tt, truth_pose});
        res.estimated.samples.push_back({tt, est.pose_estimate()});
      }
      const BodyVelocity limited = apply_limits(
          anchor.vel, cmd, cfg.vehicle_limits,
          static_cast<double>(ctrl_ms) * 1e-3);
      if (std::abs(limited.nu - cmd.nu) > 1e-12 ||
          std::abs(limited.omega - cmd.omega) > 1e-12) {
        ++saturation;
      }
      anchor = {truth_pose, limited, t};
    }
  }

  res.config = cfg;
  res.estimator = est_cfg;
  res.imu = imu_model;
  res.metrics = tracking_rmse(res.desired, res.actual);
  res.saturation_count = saturation;
  res.dropped_fixes = est.dropped_fixes();
  res.sim_duration = ref.duration();
  if (!fix_latencies.empty()) {
    std::vector<double> sorted = fix_latencies;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    res.latency_mean = sum / static_cast<double>(sorted.size());
    const std::size_t idx = static_cast<std::size_t>(
        std::min(sorted.size() - 1,
                 static_cast<std::size_t>(
                     std::ceil(0.95 * static_cast<double>(sorted.size())) - 1)));
    res.latency_p95 = sorted[idx];
  }
  return res;
}

CellStats aggregate_cell(const std::vector<double>& rmses) {
  CellStats s;
  s.n_runs = static_cast<int>(rmses.size());
  double sum_all = 0.0;
  double sum_ok = 0.0;
  for (double r : rmses) {
    sum_all += r;
    if (!classify_failure(r)) {
      sum_ok += r;
      ++s.n_ok;
    }
  }
  const bool mean_failed =
      !rmses.empty() &&
      classify_failure(sum_all / static_cast<double>(rmses.size()));
  s.failed = rmses.empty() || s.n_ok == 0 || mean_failed;
  s.mean_rmse = s.n_ok > 0 ? sum_ok / static_cast<double>(s.n_ok) : 0.0;
  return s;
}

SuiteResult run_suite(const SuiteSpec& spec, const Library& lib,
                      ProgressFn progress) {
  SuiteResult out;
  out.spec = spec;
  out.table.repeats = spec.repeats;

  const std::size_t total = spec.imus.size() * spec.speeds.size() *
                            spec.scenarios.size() * spec.estimators.size() *
                            static_cast<std::size_t>(spec.repeats);
  std::size_t run_index = 0;
  for (const std::string& imu : spec.imus) {
    for (double speed : spec.speeds) {
      for (const std::string& scenario : spec.scenarios) {
        for (const std::string& estimator : spec.estimators) {
          SuiteCell cell;
          cell.scenario = scenario;
          cell.speed = speed;
          cell.estimator = estimator;
          cell.imu = imu;
          std::vector<double> rmses;
          double latency_sum = 0.0;
          for (int rep = 0; rep < spec.repeats; ++rep) {
            RunConfig cfg = spec.base;
            cfg.scenario = scenario;
            cfg.v_des = speed;
            cfg.estimator = estimator;
            cfg.imu = imu;
            cfg.seed = derive_seed(spec.base.seed, run_index);
            const RunResult r = run_case(cfg, lib);

            SuiteRunRecord rec;
            rec.scenario = scenario;
            rec.speed = speed;
            rec.estimator = estimator;
            rec.imu = imu;
            rec.repeat = rep;
            rec.seed = cfg.seed;
            rec.rmse = r.metrics.rmse_trans;
            rec.rmse_yaw = r.metrics.rmse_yaw;
            rec.max_err = r.metrics.max_err;
            rec.latency_mean = r.latency_mean;
            rec.dropped_fixes = r.dropped_fixes;
            rec.failed = r.metrics.failed;
            out.runs.push_back(rec);

            rmses.push_back(r.metrics.rmse_trans);
            latency_sum += r.latency_mean;
            ++run_index;
            if (progress) progress(run_index, total);
          }
          cell.stats = aggregate_cell(rmses);
          cell.avg_latency =
              latency_sum / static_cast<double>(spec.repeats);
          out.table.cells.push_back(cell);
        }
      }
    }
  }
  return out;
}

std::vector<SweepPoint> sweep(const RunConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int n_seeds,
                              const Library& lib) {
  const EstimatorConfig est_base =
      base.estimator_override ? *base.estimator_override
                              : lib.estimator(base.estimator);
  std::vector<SweepPoint> out;
  for (double value : values) {
    SweepPoint pt;
    pt.value = value;
    EstimatorConfig est = est_base;
    if (axis == SweepAxis::latency) {
      est.latency = value;
    } else {
      est.drift_rate_trans = value;
    }
    for (int i = 0; i < n_seeds; ++i) {
      RunConfig cfg = base;
      cfg.estimator_override = est;
      cfg.seed = derive_seed(base.seed, 1000 + static_cast<std::uint64_t>(i));
      const RunResult r = run_case(cfg, lib);
      pt.rmses.push_back(r.metrics.rmse_trans);
    }
    double sum = 0.0;
    for (double v : pt.rmses) sum += v;
    const double n = static_cast<double>(pt.rmses.size());
    pt.mean_rmse = sum / n;
    double var = 0.0;
    for (double v : pt.rmses) var += (v - pt.mean_rmse) * (v - pt.mean_rmse);
    pt.stderr_rmse = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    out.push_back(pt);
  }
  return out;
}

}  // namespace clbench
