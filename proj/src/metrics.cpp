#include "clbench/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "clbench/errors.hpp"

namespace clbench {

bool classify_failure(double rmse) { return rmse > 10.0; }

namespace {

MetricReport finalize(const std::vector<double>& sq_trans,
                      const std::vector<double>& sq_yaw, double max_err) {
  MetricReport r;
  r.n_samples = sq_trans.size();
  double st = 0.0, sy = 0.0;
  for (double v : sq_trans) st += v;
  for (double v : sq_yaw) sy += v;
  const double n = static_cast<double>(r.n_samples);
  r.rmse_trans = std::sqrt(st / n);
  r.rmse_yaw = std::sqrt(sy / n);
  r.max_err = max_err;
  r.failed = classify_failure(r.rmse_trans);
  return r;
}

// Interpolate a path at time t: linear position, shortest-arc heading.
Pose2 interpolate(const TimedPath& path, double t) {
  const auto& s = path.samples;
  auto it = std::lower_bound(
      s.begin(), s.end(), t,
      [](const TimedPose& a, double val) { return a.t < val; });
  if (it == s.begin()) return it->pose;
  if (it == s.end()) return s.back().pose;
  const TimedPose& b = *it;
  const TimedPose& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  Pose2 p;
  p.x = a.pose.x + w * (b.pose.x - a.pose.x);
  p.y = a.pose.y + w * (b.pose.y - a.pose.y);
  p.theta = wrap_angle(a.pose.theta +
                       w * wrap_angle(b.pose.theta - a.pose.theta));
  return p;
}

}  // namespace

MetricReport tracking_rmse(const TimedPath& desired, const TimedPath& actual) {
  if (desired.samples.size() < 2 || actual.samples.size() < 1) {
    throw NoOverlap("tracking_rmse: paths too short");
  }
  const double t0 = desired.samples.front().t;
  const double t1 = desired.samples.back().t;
  std::vector<double> sq_trans, sq_yaw;
  double max_err = 0.0;
  for (const TimedPose& a : actual.samples) {
    if (a.t < t0 - 1e-9 || a.t > t1 + 1e-9) continue;
    const Pose2 d = interpolate(desired, a.t);
    const double ex = d.x - a.pose.x;
    const double ey = d.y - a.pose.y;
    const double e2 = ex * ex + ey * ey;
    const double eyaw = wrap_angle(d.theta - a.pose.theta);
    sq_trans.push_back(e2);
    sq_yaw.push_back(eyaw * eyaw);
    max_err = std::max(max_err, std::sqrt(e2));
  }
  if (sq_trans.empty()) {
    throw NoOverlap("tracking_rmse: no overlapping time range");
  }
  return finalize(sq_trans, sq_yaw, max_err);
}

Pose2 umeyama_se2(const std::vector<Vec2>& src, const std::vector<Vec2>& dst) {
  const double n = static_cast<double>(src.size());
  Vec2 mu_s, mu_d;
  for (std::size_t i = 0; i < src.size(); ++i) {
    mu_s = mu_s + src[i];
    mu_d = mu_d + dst[i];
  }
  mu_s = mu_s * (1.0 / n);
  mu_d = mu_d * (1.0 / n);
  double sum_dot = 0.0, sum_cross = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Vec2 a = src[i] - mu_s;
    const Vec2 b = dst[i] - mu_d;
    sum_dot += a.dot(b);
    sum_cross += a.cross(b);
  }
  const double theta = std::atan2(sum_cross, sum_dot);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Pose2 tf;
  tf.theta = theta;
  tf.x = mu_d.x - (c * mu_s.x - s * mu_s.y);
  tf.y = mu_d.y - (s * mu_s.x + c * mu_s.y);
  return tf;
}

MetricReport ate(const TimedPath& estimated, const TimedPath& truth,
                 bool align) {
  std::vector<Vec2> est_pts, tru_pts;
  std::vector<double> yaw_err;
  for (const TimedPose& e : estimated.samples) {
    // nearest truth sample within 10 ms
    const auto& s = truth.samples;
    auto it = std::lower_bound(
        s.begin(), s.end(), e.t,
        [](const TimedPose& a, double val) { return a.t < val; });
    const TimedPose* best = nullptr;
    if (it != s.end()) best = &*it;
    if (it != s.begin()) {
      const TimedPose* prev = &*(it - 1);
      if (!best || std::abs(prev->t - e.t) < std::abs(best->t - e.t)) {
        best = prev;
      }
    }
    if (!best || std::abs(best->t - e.t) > 0.010 + 1e-12) continue;
    est_pts.push_back(e.pose.position());
    tru_pts.push_back(best->pose.position());
    yaw_err.push_back(wrap_angle(best->pose.theta - e.pose.theta));
  }
  if (est_pts.empty()) {
    throw NoAssociation("ate: no timestamp pairs within 10 ms");
  }

  Pose2 tf;  // identity when not aligning
  if (align && est_pts.size() >= 2) {
    tf = umeyama_se2(est_pts, tru_pts);
  }
  const double c = std::cos(tf.theta);
  const double s = std::sin(tf.theta);
  std::vector<double> sq_trans, sq_yaw;
  double max_err = 0.0;
  for (std::size_t i = 0; i < est_pts.size(); ++i) {
    const Vec2 mapped{tf.x + c * est_pts[i].x - s * est_pts[i].y,
                      tf.y + s * est_pts[i].x + c * est_pts[i].y};
    const double ex = tru_pts[i].x - mapped.x;
    const double ey = tru_pts[i].y - mapped.y;
    const double e2 = ex * ex + ey * ey;
    sq_trans.push_back(e2);
    const double ey2 = wrap_angle(yaw_err[i] - (align ? tf.theta : 0.0));
    sq_yaw.push_back(ey2 * ey2);
    max_err = std::max(max_err, std::sqrt(e2));
  }
  return finalize(sq_trans, sq_yaw, max_err);
}

}  // namespace clbench
