#pragma once

#include <cstddef>
#include <vector>

#include "clbench/se2.hpp"

namespace clbench {

struct TimedPose {
  double t = 0.0;
  Pose2 pose;
};

struct TimedPath {
  std::vector<TimedPose> samples;
};

struct MetricReport {
  double rmse_trans = 0.0;  // m
  double rmse_yaw = 0.0;    // rad
  double max_err = 0.0;     // m
  std::size_t n_samples = 0;
  bool failed = false;
};

// Navigation failure threshold; strictly greater than 10 m.
bool classify_failure(double rmse);

// RMSE between the desired and actual trajectories, both in the world
// frame (no alignment). The desired path is interpolated at the actual
// path's timestamps: linear in position, shortest-arc in heading.
MetricReport tracking_rmse(const TimedPath& desired, const TimedPath& actual);

// Absolute trajectory error between estimated and true paths, with
// timestamp association within 10 ms. With align=true a closed-form
// least-squares rigid SE(2) transform is removed first.
MetricReport ate(const TimedPath& estimated, const TimedPath& truth,
                 bool align);

// Least-squares rigid transform mapping src points onto dst (2D Horn,
// scale fixed to 1). Exposed for tests.
Pose2 umeyama_se2(const std::vector<Vec2>& src, const std::vector<Vec2>& dst);

}  // namespace clbench
