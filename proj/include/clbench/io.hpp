#pragma once

#include <string>
#include <vector>

#include "clbench/harness.hpp"
#include "clbench/metrics.hpp"

namespace clbench {

// Plain-text path format: one "t x y theta" line per sample, 9
// significant digits, '#' comments allowed.
void write_path(const std::string& path, const TimedPath& tp);
TimedPath read_path(const std::string& path);

// One CSV per (imu, speed) slice: scenario rows by estimator columns,
// plus Avg. RMS and Avg. Latency footer rows. Failed cells print "-".
std::string format_table_csv(const SuiteResult& res, const std::string& imu,
                             double speed);
// Writes every (imu, speed) table under dir as table_<imu>_<speed>.csv.
std::vector<std::string> write_tables(const SuiteResult& res,
                                      const std::string& dir);

// Deterministic JSON summaries (fixed key order, fixed float format).
std::string run_summary_json(const RunResult& res);
std::string suite_summary_json(const SuiteResult& res);
std::string sweep_summary_json(SweepAxis axis,
                               const std::vector<SweepPoint>& points);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// SVG overlay of the desired path (dashed) and one solid polyline per
// run, colored by estimator.
struct PlotSeries {
  std::string label;
  TimedPath path;
};
std::string render_svg(const TimedPath& desired,
                       const std::vector<PlotSeries>& runs);

}  // namespace clbench
