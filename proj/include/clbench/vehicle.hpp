#pragma once

#include "clbench/se2.hpp"

namespace clbench {

struct VehicleState {
  Pose2 pose;
  BodyVelocity vel;
  double t = 0.0;
};

struct VehicleLimits {
  double v_max = 1.65;      // m/s
  double omega_max = 2.0;   // rad/s
  double a_max = 1.0;       // m/s^2
  double alpha_max = 2.0;   // rad/s^2
};

// Rate-limit a commanded velocity against the current one over dt and
// clamp it to the velocity envelope.
BodyVelocity apply_limits(const BodyVelocity& current, const BodyVelocity& cmd,
                          const VehicleLimits& limits, double dt);

// Advance the vehicle by dt under a velocity command. The command is
// rate-limited against the current velocity, clamped to the velocity
// envelope, then the pose is advanced by the exact constant-twist
// integral, so the integrator adds no error of its own.
VehicleState vehicle_step(const VehicleState& s, const BodyVelocity& cmd,
                          const VehicleLimits& limits, double dt);

// Finite-difference accelerations between two states (telemetry).
struct BodyAccel {
  double linear = 0.0;
  double angular = 0.0;
};
BodyAccel actual_accel(const VehicleState& prev, const VehicleState& next);

}  // namespace clbench
