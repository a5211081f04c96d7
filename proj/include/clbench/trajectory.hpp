#pragma once

#include <string>
#include <vector>

#include "clbench/se2.hpp"

namespace clbench {

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
};

struct WaypointList {
  std::string name;
  std::vector<Waypoint> points;
};

// Velocity / acceleration limits of the desired trajectory.
struct TrajLimits {
  double v_max = 1.6;  // m/s
  double a_max = 0.5;  // m/s^2
};

enum class MotionProfile { low, medium, high };

MotionProfile motion_profile(double v_des);
const char* to_string(MotionProfile p);

struct TrajSample {
  Vec2 pos;  // d*(t)
  Vec2 vel;  // d'*(t)
  Vec2 acc;  // d''*(t)
};

// Natural cubic spline through the waypoints (chord-length parameter),
// retimed along arc length with a trapezoidal speed profile that is
// additionally limited so the total acceleration (tangential plus
// centripetal) stays within a_max.
class DesiredTrajectory {
 public:
  static DesiredTrajectory fit(const WaypointList& wp, double v_des,
                               const TrajLimits& limits);

  TrajSample eval(double t) const;

  double duration() const { return duration_; }
  double length() const { return length_; }
  double v_des() const { return v_des_; }
  const TrajLimits& limits() const { return limits_; }
  const std::string& name() const { return name_; }

  // Times at which the trajectory passes each input waypoint.
  std::vector<double> waypoint_times() const;

  // Heading of the path tangent at t (falls back to the nearest moving
  // sample when the profile is at rest).
  double heading_at(double t) const;

 private:
  DesiredTrajectory() = default;

  // Spline geometry over the chord parameter u.
  struct SplineEval {
    Vec2 r, dr, ddr;  // value and derivatives w.r.t. u
  };
  SplineEval spline_eval(double u) const;
  double arclen_at(double u) const;       // arc length from u=0
  double param_at_arclen(double l) const; // inverse of arclen_at

  std::string name_;
  std::vector<double> knot_u_;      // chord parameter at waypoints
  std::vector<double> knot_len_;    // arc length at waypoints
  std::vector<double> cx_, cy_;     // spline second derivatives at knots
  std::vector<double> px_, py_;     // waypoint coordinates

  // Speed profile over arc length, constant tangential accel per cell.
  std::vector<double> prof_t_;    // time at cell boundaries
  std::vector<double> prof_len_;  // arc length at cell boundaries
  std::vector<double> prof_v_;    // speed at cell boundaries
  std::vector<double> prof_u_;    // chord parameter at cell boundaries

  double duration_ = 0.0;
  double length_ = 0.0;
  double v_des_ = 0.0;
  TrajLimits limits_;
};

}  // namespace clbench
