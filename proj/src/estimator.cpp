#include "clbench/estimator.hpp"

#include <cmath>

namespace clbench {

void Estimator::reset(const Pose2& g0, double t0) {
  pose_ = g0;
  vel_ = {};
  t_ = t0;
  buffer_.clear();
  drift_ = {};
  last_fix_capture_ = -1.0;
  dropped_fixes_ = 0;
}

void Estimator::propagate(const ImuReading& reading, double dt) {
  // A correction may have left the clock inside this reading's interval;
  // integrate only the uncovered remainder so nothing is double-counted.
  const double step = std::min(dt, reading.t - t_);
  if (step > 0.0) {
    vel_.nu += reading.ax * step;
    vel_.omega = reading.gyro;
    pose_ = advance_twist(pose_, vel_.nu, vel_.omega, step);
  }
  t_ = reading.t;
  buffer_.push_back({reading, dt});

  // Without corrections the buffer caps at latency plus a margin.
  const double max_span = cfg_.latency + 0.2;
  while (!buffer_.empty() &&
         t_ - (buffer_.front().reading.t - buffer_.front().dt) > max_span) {
    buffer_.pop_front();
  }
}

VisualFix Estimator::make_fix(const Pose2& truth_pose,
                              const BodyVelocity& truth_vel,
                              double dist_since_last_fix, double t_capture,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = std::sqrt(std::max(dist_since_last_fix, 0.0));
  drift_.x += gauss(rng) * cfg_.drift_rate_trans * scale;
  drift_.y += gauss(rng) * cfg_.drift_rate_trans * scale;
  drift_.theta = wrap_angle(drift_.theta +
                            gauss(rng) * cfg_.drift_rate_rot * scale);

  const Pose2 noise{gauss(rng) * cfg_.fix_noise_trans,
                    gauss(rng) * cfg_.fix_noise_trans,
                    gauss(rng) * cfg_.fix_noise_rot};

  VisualFix fix;
  fix.t_capture = t_capture;
  double latency = cfg_.latency;
  if (cfg_.latency_jitter) {
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    latency *= 1.0 + jitter(rng);
  }
  fix.t_available = t_capture + latency;
  fix.pose_meas = compose(compose(truth_pose, drift_), noise);
  fix.vel_meas = truth_vel;
  return fix;
}

bool Estimator::correct(const VisualFix& fix, double now) {
  const double tc = fix.t_capture;
  if (!buffer_.empty()) {
    const double oldest = buffer_.front().reading.t - buffer_.front().dt;
    if (tc < oldest - 1e-9) {
      ++dropped_fixes_;
      return false;
    }
  } else if (tc < t_ - 1e-9) {
    ++dropped_fixes_;
    return false;
  }

  Pose2 pose = fix.pose_meas;
  BodyVelocity vel = fix.vel_meas;
  for (const auto& e : buffer_) {
    if (e.reading.t <= tc + 1e-12) continue;
    const double start = e.reading.t - e.dt;
    const double step_dt = (start < tc) ? e.reading.t - tc : e.dt;
    vel.nu += e.reading.ax * step_dt;
    vel.omega = e.reading.gyro;
    pose = advance_twist(pose, vel.nu, vel.omega, step_dt);
  }
  pose_ = pose;
  vel_ = vel;
  // Replay ends at the newest buffered reading; with none past the
  // capture the state now sits at the capture time itself.
  t_ = std::max(t_, tc);
  (void)now;
  last_fix_capture_ = tc;
  trim_buffer(tc);
  return true;
}

void Estimator::trim_buffer(double oldest_needed) {
  while (!buffer_.empty() &&
         buffer_.front().reading.t <= oldest_needed + 1e-12) {
    buffer_.pop_front();
  }
}

Pose2 Estimator::output(const Pose2& truth_pose) const {
  if (cfg_.mode == EstimatorMode::ground_truth) return truth_pose;
  return pose_;
}

}  // namespace clbench
