#pragma once

#include <deque>
#include <random>
#include <string>

#include "clbench/se2.hpp"
#include "clbench/sensors.hpp"

namespace clbench {

enum class EstimatorMode { closed_loop_estimate, ground_truth };

// Parametric VI-SLAM surrogate: a delayed, drifting visual fix fused
// with high-rate IMU dead reckoning via buffer-and-replay correction.
struct EstimatorConfig {
  std::string name = "custom";
  double latency = 0.03;          // s from capture to availability
  double output_rate = 50.0;      // Hz
  double drift_rate_trans = 0.0;  // m drift std per sqrt(m traveled)
  double drift_rate_rot = 0.0;    // rad drift std per sqrt(m traveled)
  double fix_noise_trans = 0.0;   // m std per fix
  double fix_noise_rot = 0.0;     // rad std per fix
  ImuModel imu;
  EstimatorMode mode = EstimatorMode::closed_loop_estimate;
  bool latency_jitter = false;    // uniform +-10% per fix
};

struct VisualFix {
  double t_capture = 0.0;
  double t_available = 0.0;
  Pose2 pose_meas;
  BodyVelocity vel_meas;  // visual velocity estimate at capture
};

class Estimator {
 public:
  explicit Estimator(const EstimatorConfig& cfg) : cfg_(cfg) {}

  void reset(const Pose2& g0, double t0);

  // Dead-reckon over the reading's interval and buffer it for replay.
  void propagate(const ImuReading& reading, double dt);

  // Build the visual measurement captured at t_capture. The map drift
  // random-walks with the distance traveled since the previous fix.
  VisualFix make_fix(const Pose2& truth_pose, const BodyVelocity& truth_vel,
                     double dist_since_last_fix, double t_capture,
                     std::mt19937_64& rng);

  // Rewind to the fix, snap pose and velocity, replay buffered IMU up
  // to `now`. Returns false (and counts the drop) for a stale fix whose
  // capture time has left the buffer.
  bool correct(const VisualFix& fix, double now);

  // Pose fed to the controller: truth in ground_truth mode, fused
  // estimate otherwise.
  Pose2 output(const Pose2& truth_pose) const;

  const Pose2& pose_estimate() const { return pose_; }
  const BodyVelocity& velocity_estimate() const { return vel_; }
  const Pose2& drift_accum() const { return drift_; }
  double time() const { return t_; }
  long dropped_fixes() const { return dropped_fixes_; }
  const EstimatorConfig& config() const { return cfg_; }

 private:
  struct BufferedReading {
    ImuReading reading;
    double dt;
  };
  void trim_buffer(double oldest_needed);

  EstimatorConfig cfg_;
  Pose2 pose_;
  BodyVelocity vel_;
  double t_ = 0.0;
  std::deque<BufferedReading> buffer_;
  Pose2 drift_;
  double last_fix_capture_ = -1.0;
  long dropped_fixes_ = 0;
};

}  // namespace clbench
