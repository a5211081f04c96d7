#include "clbench/vehicle.hpp"

#include <algorithm>

namespace clbench {

BodyVelocity apply_limits(const BodyVelocity& current, const BodyVelocity& cmd,
                          const VehicleLimits& limits, double dt) {
  const double dv = std::clamp(cmd.nu - current.nu, -limits.a_max * dt,
                               limits.a_max * dt);
  const double dw = std::clamp(cmd.omega - current.omega,
                               -limits.alpha_max * dt, limits.alpha_max * dt);
  BodyVelocity v;
  v.nu = std::clamp(current.nu + dv, -limits.v_max, limits.v_max);
  v.omega = std::clamp(current.omega + dw, -limits.omega_max,
                       limits.omega_max);
  return v;
}

VehicleState vehicle_step(const VehicleState& s, const BodyVelocity& cmd,
                          const VehicleLimits& limits, double dt) {
  const BodyVelocity v = apply_limits(s.vel, cmd, limits, dt);
  VehicleState next;
  next.vel = v;
  next.pose = advance_twist(s.pose, v.nu, v.omega, dt);
  next.t = s.t + dt;
  return next;
}

BodyAccel actual_accel(const VehicleState& prev, const VehicleState& next) {
  const double dt = next.t - prev.t;
  return {(next.vel.nu - prev.vel.nu) / dt,
          (next.vel.omega - prev.vel.omega) / dt};
}

}  // namespace clbench
