#include "clbench/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "clbench/errors.hpp"

namespace clbench {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string g9(double v) { return fmt("%.9g", v); }

const SuiteCell* find_cell(const SuiteResult& res, const std::string& imu,
                           double speed, const std::string& scenario,
                           const std::string& estimator) {
  for (const SuiteCell& c : res.table.cells) {
    if (c.imu == imu && c.scenario == scenario && c.estimator == estimator &&
        std::abs(c.speed - speed) < 1e-9) {
      return &c;
    }
  }
  return nullptr;
}

}  // namespace

void write_path(const std::string& path, const TimedPath& tp) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "# t x y theta\n";
  for (const TimedPose& s : tp.samples) {
    f << g9(s.t) << ' ' << g9(s.pose.x) << ' ' << g9(s.pose.y) << ' '
      << g9(s.pose.theta) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
}

TimedPath read_path(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  TimedPath tp;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::size_t pos = line.find('#');
    if (pos != std::string::npos) line.resize(pos);
    std::istringstream ss(line);
    TimedPose s;
    if (!(ss >> s.t)) continue;  // blank line
    if (!(ss >> s.pose.x >> s.pose.y >> s.pose.theta)) {
      throw IoError(path + ":" + std::to_string(lineno) + ": malformed line");
    }
    tp.samples.push_back(s);
  }
  return tp;
}

std::string format_table_csv(const SuiteResult& res, const std::string& imu,
                             double speed) {
  const SuiteSpec& spec = res.spec;
  std::ostringstream out;
  out << "scenario";
  for (const std::string& e : spec.estimators) out << ',' << e;
  out << '\n';

  std::vector<double> rms_sum(spec.estimators.size(), 0.0);
  std::vector<int> rms_n(spec.estimators.size(), 0);
  std::vector<double> lat_sum(spec.estimators.size(), 0.0);
  std::vector<int> lat_n(spec.estimators.size(), 0);

  for (const std::string& sc : spec.scenarios) {
    out << sc;
    for (std::size_t j = 0; j < spec.estimators.size(); ++j) {
      const SuiteCell* c = find_cell(res, imu, speed, sc, spec.estimators[j]);
      if (!c || c->stats.failed) {
        out << ",-";
      } else {
        out << ',' << fmt("%.4f", c->stats.mean_rmse);
        rms_sum[j] += c->stats.mean_rmse;
        ++rms_n[j];
      }
      if (c) {
        lat_sum[j] += c->avg_latency;
        ++lat_n[j];
      }
    }
    out << '\n';
  }

  out << "Avg. RMS";
  for (std::size_t j = 0; j < spec.estimators.size(); ++j) {
    if (rms_n[j] == 0) {
      out << ",-";
    } else {
      out << ',' << fmt("%.4f", rms_sum[j] / rms_n[j]);
    }
  }
  out << '\n';
  out << "Avg. Latency (ms)";
  for (std::size_t j = 0; j < spec.estimators.size(); ++j) {
    if (lat_n[j] == 0) {
      out << ",-";
    } else {
      out << ',' << fmt("%.1f", 1000.0 * lat_sum[j] / lat_n[j]);
    }
  }
  out << '\n';
  return out.str();
}

std::vector<std::string> write_tables(const SuiteResult& res,
                                      const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const std::string& imu : res.spec.imus) {
    for (double speed : res.spec.speeds) {
      const std::string path =
          dir + "/table_" + imu + "_" + fmt("%g", speed) + ".csv";
      write_text(path, format_table_csv(res, imu, speed));
      written.push_back(path);
    }
  }
  return written;
}

namespace {

using json = nlohmann::ordered_json;

json metrics_json(const MetricReport& m) {
  return {{"rmse_trans", m.rmse_trans},
          {"rmse_yaw", m.rmse_yaw},
          {"max_err", m.max_err},
          {"n_samples", m.n_samples},
          {"failed", m.failed}};
}

json config_json(const RunConfig& cfg) {
  return {{"scenario", cfg.scenario},
          {"v_des", cfg.v_des},
          {"estimator", cfg.estimator},
          {"imu", cfg.imu},
          {"seed", cfg.seed},
          {"warmup", cfg.warmup},
          {"loop_mode", cfg.loop_mode == LoopMode::closed ? "closed" : "open"}};
}

json estimator_json(const EstimatorConfig& e) {
  return {{"name", e.name},
          {"latency", e.latency},
          {"drift_rate_trans", e.drift_rate_trans},
          {"drift_rate_rot", e.drift_rate_rot},
          {"fix_noise_trans", e.fix_noise_trans},
          {"fix_noise_rot", e.fix_noise_rot},
          {"latency_jitter", e.latency_jitter},
          {"mode", e.mode == EstimatorMode::ground_truth
                       ? "ground_truth"
                       : "closed_loop_estimate"}};
}

}  // namespace

std::string run_summary_json(const RunResult& res) {
  json j;
  j["config"] = config_json(res.config);
  j["estimator"] = estimator_json(res.estimator);
  j["imu"] = res.imu.name;
  j["metrics"] = metrics_json(res.metrics);
  j["latency_mean"] = res.latency_mean;
  j["latency_p95"] = res.latency_p95;
  j["saturation_count"] = res.saturation_count;
  j["dropped_fixes"] = res.dropped_fixes;
  j["sim_duration"] = res.sim_duration;
  return j.dump(2) + "\n";
}

std::string suite_summary_json(const SuiteResult& res) {
  json j;
  j["spec"] = {{"scenarios", res.spec.scenarios},
               {"speeds", res.spec.speeds},
               {"estimators", res.spec.estimators},
               {"imus", res.spec.imus},
               {"repeats", res.spec.repeats},
               {"seed", res.spec.base.seed},
               {"loop_mode", res.spec.base.loop_mode == LoopMode::closed
                                 ? "closed"
                                 : "open"}};
  json cells = json::array();
  for (const SuiteCell& c : res.table.cells) {
    cells.push_back({{"scenario", c.scenario},
                     {"speed", c.speed},
                     {"estimator", c.estimator},
                     {"imu", c.imu},
                     {"mean_rmse", c.stats.mean_rmse},
                     {"n_ok", c.stats.n_ok},
                     {"n_runs", c.stats.n_runs},
                     {"failed", c.stats.failed},
                     {"avg_latency", c.avg_latency}});
  }
  j["cells"] = cells;
  json runs = json::array();
  for (const SuiteRunRecord& r : res.runs) {
    runs.push_back({{"scenario", r.scenario},
                    {"speed", r.speed},
                    {"estimator", r.estimator},
                    {"imu", r.imu},
                    {"repeat", r.repeat},
                    {"seed", r.seed},
                    {"rmse", r.rmse},
                    {"rmse_yaw", r.rmse_yaw},
                    {"max_err", r.max_err},
                    {"latency_mean", r.latency_mean},
                    {"dropped_fixes", r.dropped_fixes},
                    {"failed", r.failed}});
  }
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

std::string sweep_summary_json(SweepAxis axis,
                               const std::vector<SweepPoint>& points) {
  json j;
  j["axis"] = axis == SweepAxis::latency ? "latency" : "drift_rate_trans";
  json pts = json::array();
  for (const SweepPoint& p : points) {
    pts.push_back({{"value", p.value},
                   {"mean_rmse", p.mean_rmse},
                   {"stderr_rmse", p.stderr_rmse},
                   {"rmses", p.rmses}});
  }
  j["points"] = pts;
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << text;
  if (!f) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string render_svg(const TimedPath& desired,
                       const std::vector<PlotSeries>& runs) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  const int n_colors = 8;

  double xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
  auto grow = [&](const TimedPath& p) {
    for (const TimedPose& s : p.samples) {
      xmin = std::min(xmin, s.pose.x);
      xmax = std::max(xmax, s.pose.x);
      ymin = std::min(ymin, s.pose.y);
      ymax = std::max(ymax, s.pose.y);
    }
  };
  grow(desired);
  for (const PlotSeries& r : runs) grow(r.path);
  if (xmin > xmax) {
    xmin = ymin = 0.0;
    xmax = ymax = 1.0;
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-6});
  const double margin = 40.0;
  const double scale = 720.0 / span;
  const double w = (xmax - xmin) * scale + 2 * margin;
  const double h = (ymax - ymin) * scale + 2 * margin;
  // SVG y grows downward; flip so the plot is in the usual orientation.
  auto sx = [&](double x) { return margin + (x - xmin) * scale; };
  auto sy = [&](double y) { return h - margin - (y - ymin) * scale; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", w)
      << "\" height=\"" << fmt("%.0f", h) << "\" viewBox=\"0 0 "
      << fmt("%.0f", w) << ' ' << fmt("%.0f", h) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto polyline = [&](const TimedPath& p, const std::string& style) {
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
      if (i) out << ' ';
      out << fmt("%.2f", sx(p.samples[i].pose.x)) << ','
          << fmt("%.2f", sy(p.samples[i].pose.y));
    }
    out << "\"/>\n";
  };

  polyline(desired,
           "stroke=\"#555555\" stroke-width=\"2\" stroke-dasharray=\"8 5\"");
  // Color by label so repeats of one estimator share a color.
  std::vector<std::string> labels;
  for (const PlotSeries& r : runs) {
    auto it = std::find(labels.begin(), labels.end(), r.label);
    std::size_t idx;
    if (it == labels.end()) {
      idx = labels.size();
      labels.push_back(r.label);
    } else {
      idx = static_cast<std::size_t>(it - labels.begin());
    }
    polyline(r.path, "stroke=\"" + std::string(kPalette[idx % n_colors]) +
                         "\" stroke-width=\"1.2\" stroke-opacity=\"0.85\"");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double ly = margin + 18.0 * static_cast<double>(i);
    out << "<text x=\"" << fmt("%.0f", margin) << "\" y=\"" << fmt("%.0f", ly)
        << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\""
        << kPalette[i % n_colors] << "\">" << labels[i] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace clbench
