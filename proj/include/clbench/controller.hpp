#pragma once

#include <optional>
#include <vector>

#include "clbench/se2.hpp"
#include "clbench/trajectory.hpp"
#include "clbench/vehicle.hpp"

namespace clbench {

// Gains of the flatness-based reference controller. lambda is the
// distance of the virtual point ahead of the robot; it decays toward
// epsilon, which must stay strictly positive.
struct FlatGains {
  double c_p = 2.0;       // 1/s^2
  double c_d = 3.0;       // 1/s
  double c_lambda = 1.0;  // 1/s
  double epsilon = 0.01;  // m
  double lambda0 = 0.2;   // m, > epsilon
};

struct OffsetState {
  double lambda = 0.2;
  double lambda_dot = 0.0;

  static OffsetState initial(const FlatGains& k) {
    return {k.lambda0, -k.c_lambda * (k.lambda0 - k.epsilon)};
  }
};

// Gains of the real-time velocity tracking law.
struct TrackingGains {
  double k_x = 1.5;      // 1/s
  double k_y = 2.0;      // 1/(m s)
  double k_theta = 3.0;  // 1/s
};

struct ControlAccel {
  double u1 = 0.0;  // m/s^2 forward
  double u2 = 0.0;  // rad/s^2 angular
};

// Flat tracking law: acceleration command that exponentially stabilizes
// the virtual point lambda ahead of the robot onto the desired path.
ControlAccel flat_control(const Pose2& g, const BodyVelocity& V,
                          const OffsetState& off, const Vec2& d_star,
                          const Vec2& d_star_dot, const FlatGains& gains);

// Exact update of the offset ODE over dt.
OffsetState step_offset(const OffsetState& off, const FlatGains& gains,
                        double dt);

struct ReferenceSample {
  Pose2 pose;
  BodyVelocity vel;
};

// Time-sampled reference (g*, V*) at a fixed rate starting at t = 0.
struct ReferenceTrajectory {
  double dt = 0.02;
  std::vector<ReferenceSample> samples;

  double duration() const {
    return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1);
  }
  // Sample at the grid point nearest to t, clamped to the ends.
  const ReferenceSample& at_time(double t) const;
};

// Integrate the virtual vehicle under the flat control law against the
// desired trajectory, producing the reference to track in real time.
// A settle tail (seconds past the desired duration) lets the reference
// come to rest at the final waypoint.
ReferenceTrajectory generate_reference(const DesiredTrajectory& traj,
                                       const FlatGains& gains, const Pose2& g0,
                                       double rate, double tail = 5.0);

// Velocity tracking law. When limits are given the command is clamped
// to the vehicle's velocity envelope.
BodyVelocity velocity_command(const Pose2& g_est, const Pose2& g_ref,
                              const BodyVelocity& v_ref,
                              const TrackingGains& k,
                              const std::optional<VehicleLimits>& limits = {});

}  // namespace clbench
