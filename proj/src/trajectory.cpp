#include "clbench/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "clbench/errors.hpp"

namespace clbench {

namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr double kGlNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
constexpr double kGlWeight[5] = {0.2369268850561891, 0.4786286704993665,
                                 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};

// Natural cubic spline second derivatives (Thomas algorithm).
std::vector<double> solve_natural_spline(const std::vector<double>& u,
                                         const std::vector<double>& y) {
  const std::size_t n = u.size();
  std::vector<double> m(n, 0.0);
  if (n < 3) return m;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = u[i] - u[i - 1];
    const double h1 = u[i + 1] - u[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
  }
  // Forward elimination over interior rows.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = (d[i] - c[i] * (i + 2 < n ? m[i + 1] : 0.0)) / b[i];
    if (i == 1) break;
  }
  return m;
}

std::size_t locate(const std::vector<double>& xs, double x) {
  if (x <= xs.front()) return 0;
  if (x >= xs.back()) return xs.size() - 2;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  return static_cast<std::size_t>(it - xs.begin()) - 1;
}

}  // namespace

MotionProfile motion_profile(double v_des) {
  if (v_des < 0.75) return MotionProfile::low;
  if (v_des < 1.25) return MotionProfile::medium;
  return MotionProfile::high;
}

const char* to_string(MotionProfile p) {
  switch (p) {
    case MotionProfile::low:
      return "low";
    case MotionProfile::medium:
      return "medium";
    default:
      return "high";
  }
}

DesiredTrajectory::SplineEval DesiredTrajectory::spline_eval(double u) const {
  const std::size_t i = locate(knot_u_, u);
  const double h = knot_u_[i + 1] - knot_u_[i];
  const double A = (knot_u_[i + 1] - u) / h;
  const double B = (u - knot_u_[i]) / h;
  SplineEval e;
  const double cA = (A * A * A - A) * h * h / 6.0;
  const double cB = (B * B * B - B) * h * h / 6.0;
  e.r.x = A * px_[i] + B * px_[i + 1] + cA * cx_[i] + cB * cx_[i + 1];
  e.r.y = A * py_[i] + B * py_[i + 1] + cA * cy_[i] + cB * cy_[i + 1];
  const double dA = -1.0 / h;
  const double dB = 1.0 / h;
  const double dcA = (3.0 * A * A - 1.0) * dA * h * h / 6.0;
  const double dcB = (3.0 * B * B - 1.0) * dB * h * h / 6.0;
  e.dr.x = dA * px_[i] + dB * px_[i + 1] + dcA * cx_[i] + dcB * cx_[i + 1];
  e.dr.y = dA * py_[i] + dB * py_[i + 1] + dcA * cy_[i] + dcB * cy_[i + 1];
  e.ddr.x = A * cx_[i] + B * cx_[i + 1];
  e.ddr.y = A * cy_[i] + B * cy_[i + 1];
  return e;
}

double DesiredTrajectory::arclen_at(double u) const {
  const std::size_t i = locate(knot_u_, u);
  double l = knot_len_[i];
  const double lo = knot_u_[i];
  if (u <= lo) return l;
  // 4 sub-intervals of 5-point GL, matching the knot table construction.
  const int sub = 4;
  const double step = (u - lo) / sub;
  for (int k = 0; k < sub; ++k) {
    const double a = lo + k * step;
    const double mid = a + 0.5 * step;
    const double half = 0.5 * step;
    for (int g = 0; g < 5; ++g) {
      const SplineEval e = spline_eval(mid + half * kGlNode[g]);
      l += kGlWeight[g] * half * e.dr.norm();
    }
  }
  return l;
}

double DesiredTrajectory::param_at_arclen(double l) const {
  l = std::clamp(l, 0.0, length_);
  const std::size_t i = locate(knot_len_, l);
  const double l0 = knot_len_[i];
  const double l1 = knot_len_[i + 1];
  const double u0 = knot_u_[i];
  const double u1 = knot_u_[i + 1];
  double u = u0 + (u1 - u0) * (l - l0) / std::max(l1 - l0, 1e-300);
  // Newton with bisection safeguard.
  double lo = u0, hi = u1;
  for (int it = 0; it < 30; ++it) {
    const double f = arclen_at(u) - l;
    if (f > 0.0) {
      hi = u;
    } else {
      lo = u;
    }
    if (std::abs(f) < 1e-12) break;
    const double speed = spline_eval(u).dr.norm();
    double next = u - f / std::max(speed, 1e-12);
    if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - u) < 1e-15) {
      u = next;
      break;
    }
    u = next;
  }
  return u;
}

DesiredTrajectory DesiredTrajectory::fit(const WaypointList& wp, double v_des,
                                         const TrajLimits& limits) {
  const std::size_t n = wp.points.size();
  if (n < 2) {
    throw DegenerateWaypoints("scenario '" + wp.name +
                              "': need at least 2 waypoints");
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double dx = wp.points[i].x - wp.points[i - 1].x;
    const double dy = wp.points[i].y - wp.points[i - 1].y;
    if (std::hypot(dx, dy) <= 1e-6) {
      throw DegenerateWaypoints("scenario '" + wp.name +
                                "': coincident waypoints at index " +
                                std::to_string(i));
    }
  }
  if (v_des <= 0.0 || v_des > limits.v_max) {
    throw InfeasibleSpeed("v_des must be in (0, v_max]");
  }

  DesiredTrajectory traj;
  traj.name_ = wp.name;
  traj.v_des_ = v_des;
  traj.limits_ = limits;
  traj.px_.resize(n);
  traj.py_.resize(n);
  traj.knot_u_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    traj.px_[i] = wp.points[i].x;
    traj.py_[i] = wp.points[i].y;
    if (i == 0) {
      traj.knot_u_[i] = 0.0;
    } else {
      const double dx = traj.px_[i] - traj.px_[i - 1];
      const double dy = traj.py_[i] - traj.py_[i - 1];
      traj.knot_u_[i] = traj.knot_u_[i - 1] + std::hypot(dx, dy);
    }
  }
  traj.cx_ = solve_natural_spline(traj.knot_u_, traj.px_);
  traj.cy_ = solve_natural_spline(traj.knot_u_, traj.py_);

  // Cumulative arc length at knots, 4x 5-point GL per segment.
  traj.knot_len_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double seg = 0.0;
    const double a = traj.knot_u_[i];
    const double step = (traj.knot_u_[i + 1] - a) / 4.0;
    for (int k = 0; k < 4; ++k) {
      const double mid = a + (k + 0.5) * step;
      const double half = 0.5 * step;
      for (int g = 0; g < 5; ++g) {
        const SplineEval e = traj.spline_eval(mid + half * kGlNode[g]);
        seg += kGlWeight[g] * half * e.dr.norm();
      }
    }
    traj.knot_len_[i + 1] = traj.knot_len_[i] + seg;
  }
  traj.length_ = traj.knot_len_.back();

  // Speed profile over arc length: forward/backward passes with the
  // tangential budget reduced by the centripetal load at current speed.
  const std::size_t cells = static_cast<std::size_t>(
      std::clamp(traj.length_ / 0.02, 512.0, 16384.0));
  const double dl = traj.length_ / static_cast<double>(cells);
  // Budget slightly inside the limit so curvature variation between
  // profile cells cannot push the sampled acceleration over a_max.
  const double a_max = limits.a_max * (1.0 - 1e-3);
  std::vector<double> kappa(cells + 1, 0.0);
  traj.prof_u_.resize(cells + 1);
  traj.prof_len_.resize(cells + 1);
  auto kappa_at = [&](double l) {
    const SplineEval e = traj.spline_eval(traj.param_at_arclen(l));
    const double sp = e.dr.norm();
    return std::abs(e.dr.cross(e.ddr)) / std::max(sp * sp * sp, 1e-12);
  };
  for (std::size_t i = 0; i <= cells; ++i) {
    const double l = std::min(static_cast<double>(i) * dl, traj.length_);
    traj.prof_len_[i] = l;
    traj.prof_u_[i] = traj.param_at_arclen(l);
    // Conservative per-node curvature: max over the node and the two
    // adjacent half-cells, so spikes between nodes cannot sneak the
    // sampled acceleration above the budget.
    double k = kappa_at(l);
    if (i > 0) k = std::max(k, kappa_at(l - 0.5 * dl));
    if (i < cells) k = std::max(k, kappa_at(l + 0.5 * dl));
    kappa[i] = k;
  }
  std::vector<double> v(cells + 1, 0.0);
  auto v_cap = [&](std::size_t i) {
    if (kappa[i] < 1e-9) return v_des;
    return std::min(v_des, std::sqrt(a_max / kappa[i]));
  };
  auto tangential = [&](double speed, double k) {
    const double lat = speed * speed * k;
    const double rem = a_max * a_max - lat * lat;
    return rem > 0.0 ? std::sqrt(rem) : 0.0;
  };
  v[0] = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    const double at = tangential(v[i], kappa[i]);
    const double reach = std::sqrt(v[i] * v[i] + 2.0 * at * dl);
    v[i + 1] = std::min(v_cap(i + 1), reach);
  }
  double v_back = 0.0;
  v[cells] = 0.0;
  for (std::size_t i = cells; i-- > 0;) {
    const double at = tangential(v_back, kappa[i + 1]);
    v_back = std::sqrt(v_back * v_back + 2.0 * at * dl);
    v[i] = std::min(v[i], v_back);
    v_back = v[i];
  }
  traj.prof_v_ = v;
  traj.prof_t_.assign(cells + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const double avg = std::max(0.5 * (v[i] + v[i + 1]), 1e-6);
    traj.prof_t_[i + 1] = traj.prof_t_[i] + dl / avg;
  }
  traj.duration_ = traj.prof_t_.back();
  return traj;
}

TrajSample DesiredTrajectory::eval(double t) const {
  auto at_rest = [&](double u) {
    TrajSample s;
    s.pos = spline_eval(u).r;
    s.vel = {0.0, 0.0};
    s.acc = {0.0, 0.0};
    return s;
  };
  if (t <= 0.0) return at_rest(knot_u_.front());
  if (t >= duration_) return at_rest(knot_u_.back());

  const std::size_t j = locate(prof_t_, t);
  const double dl = prof_len_[j + 1] - prof_len_[j];
  const double a =
      (prof_v_[j + 1] * prof_v_[j + 1] - prof_v_[j] * prof_v_[j]) / (2.0 * dl);
  const double tau = t - prof_t_[j];
  const double speed = prof_v_[j] + a * tau;
  double l = prof_len_[j] + prof_v_[j] * tau + 0.5 * a * tau * tau;
  l = std::clamp(l, prof_len_[j], prof_len_[j + 1]);

  const double u = param_at_arclen(l);
  const SplineEval e = spline_eval(u);
  const double sp = e.dr.norm();
  const Vec2 tangent = e.dr * (1.0 / sp);
  const double proj = e.ddr.dot(tangent);
  const Vec2 curv = (e.ddr - tangent * proj) * (1.0 / (sp * sp));

  TrajSample s;
  s.pos = e.r;
  s.vel = tangent * speed;
  s.acc = tangent * a + curv * (speed * speed);
  return s;
}

std::vector<double> DesiredTrajectory::waypoint_times() const {
  std::vector<double> out;
  out.reserve(knot_len_.size());
  for (double l : knot_len_) {
    if (l <= 0.0) {
      out.push_back(0.0);
      continue;
    }
    if (l >= length_) {
      out.push_back(duration_);
      continue;
    }
    const std::size_t j = locate(prof_len_, l);
    const double dl = prof_len_[j + 1] - prof_len_[j];
    const double a =
        (prof_v_[j + 1] * prof_v_[j + 1] - prof_v_[j] * prof_v_[j]) /
        (2.0 * dl);
    const double rem = l - prof_len_[j];
    double tau;
    if (std::abs(a) < 1e-12) {
      tau = rem / std::max(prof_v_[j], 1e-9);
    } else {
      const double disc = prof_v_[j] * prof_v_[j] + 2.0 * a * rem;
      tau = (-prof_v_[j] + std::sqrt(std::max(disc, 0.0))) / a;
    }
    out.push_back(prof_t_[j] + tau);
  }
  return out;
}

double DesiredTrajectory::heading_at(double t) const {
  double l;
  if (t <= 0.0) {
    l = 0.0;
  } else if (t >= duration_) {
    l = length_;
  } else {
    const std::size_t j = locate(prof_t_, t);
    const double dl = prof_len_[j + 1] - prof_len_[j];
    const double a =
        (prof_v_[j + 1] * prof_v_[j + 1] - prof_v_[j] * prof_v_[j]) /
        (2.0 * dl);
    const double tau = t - prof_t_[j];
    l = std::clamp(prof_len_[j] + prof_v_[j] * tau + 0.5 * a * tau * tau,
                   prof_len_[j], prof_len_[j + 1]);
  }
  const SplineEval e = spline_eval(param_at_arclen(l));
  return std::atan2(e.dr.y, e.dr.x);
}

}  // namespace clbench
