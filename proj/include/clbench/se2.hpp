#pragma once

#include <cmath>

namespace clbench {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Planar rigid-body pose, theta kept wrapped to (-pi, pi].
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  static Pose2 identity() { return {}; }
};

// Forward speed and yaw rate in the body frame.
struct BodyVelocity {
  double nu = 0.0;     // m/s
  double omega = 0.0;  // rad/s
};

// Group product: pose of frame b expressed through frame a.
inline Pose2 compose(const Pose2& a, const Pose2& b) {
  const double c = std::cos(a.theta);
  const double s = std::sin(a.theta);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y,
          wrap_angle(a.theta + b.theta)};
}

inline Pose2 inverse(const Pose2& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {-(c * p.x + s * p.y), -(-s * p.x + c * p.y), wrap_angle(-p.theta)};
}

// Body-frame error coordinates of g^-1 g*.
struct PoseError {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

inline PoseError relative_error(const Pose2& g, const Pose2& g_star) {
  const double c = std::cos(g.theta);
  const double s = std::sin(g.theta);
  const double dx = g_star.x - g.x;
  const double dy = g_star.y - g.y;
  return {c * dx + s * dy, -s * dx + c * dy, wrap_angle(g_star.theta - g.theta)};
}

// Advance a pose by a constant body twist (nu, omega) held for dt.
// Exact integral of the unicycle kinematics; no discretization error.
inline Pose2 advance_twist(const Pose2& p, double nu, double omega, double dt) {
  double dx, dy;
  const double a = omega * dt;
  if (std::abs(omega) < 1e-12) {
    dx = nu * dt;
    dy = 0.5 * nu * omega * dt * dt;  // first-order term, ~0 here
  } else {
    dx = (nu / omega) * std::sin(a);
    dy = (nu / omega) * (1.0 - std::cos(a));
  }
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  return {p.x + c * dx - s * dy, p.y + s * dx + c * dy, wrap_angle(p.theta + a)};
}

}  // namespace clbench
