#include "clbench/presets.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "clbench/errors.hpp"

namespace clbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

WaypointList make_scenario(std::string name,
                           std::initializer_list<Waypoint> pts) {
  WaypointList wp;
  wp.name = std::move(name);
  wp.points.assign(pts);
  return wp;
}

ImuModel make_imu(std::string name, double a_nd, double g_nd, double a_rw,
                  double g_rw) {
  ImuModel m;
  m.name = std::move(name);
  m.accel_noise_density = a_nd;
  m.gyro_noise_density = g_nd;
  m.accel_bias_rw = a_rw;
  m.gyro_bias_rw = g_rw;
  m.rate = 200.0;
  return m;
}

EstimatorConfig make_estimator(std::string name, double latency,
                               double drift_t, double drift_r, double noise_t,
                               double noise_r) {
  EstimatorConfig e;
  e.name = std::move(name);
  e.latency = latency;
  e.drift_rate_trans = drift_t;
  e.drift_rate_rot = drift_r;
  e.fix_noise_trans = noise_t;
  e.fix_noise_rot = noise_r;
  return e;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

}  // namespace

Library Library::builtin() {
  Library lib;

  // Six benchmark courses: two short (~50 m), two medium (~120 m, one
  // retracing itself, one crossing its own segments), two long (~240 m,
  // same split). All start at the world origin. A plain 50 m straight
  // segment is included for controller baselines.
  lib.add_scenario(make_scenario(
      "s1", {{0, 0}, {10, 0}, {20, 2}, {30, 0}, {40, 5}, {46, 11}}));
  lib.add_scenario(make_scenario(
      "s2",
      {{0, 0}, {8, 0}, {16, 4}, {24, -4}, {32, 4}, {40, 0}, {48, 0}}));
  lib.add_scenario(make_scenario(
      "m1", {{0, 0},  {15, 0}, {22, 5}, {15, 10}, {0, 10}, {-7, 5},
             {0, 0},  {15, 0}, {22, 5}, {15, 10}, {0, 10}, {-7, 5},
             {0, 0}}));
  lib.add_scenario(make_scenario(
      "m2", {{0, 0},   {12, 0},  {20, 6},  {28, 12}, {36, 6},
             {28, 0},  {20, 6},  {12, 12}, {2, 10},  {-4, 2},
             {6, -4},  {18, -6}, {30, -4}, {40, 2}}));
  lib.add_scenario(make_scenario(
      "l1", {{0, 0},   {20, 0},  {32, 6},  {36, 16}, {28, 24}, {12, 26},
             {-2, 20}, {-6, 10}, {0, 0},   {20, 0},  {32, 6},  {36, 16},
             {28, 24}, {12, 26}, {-2, 20}, {-6, 10}, {0, 0}}));
  lib.add_scenario(make_scenario(
      "l2", {{0, 0},   {30, 0},  {45, 10}, {60, 0},  {86, 0},  {86, 20},
             {60, 20}, {45, 10}, {30, 20}, {0, 20},  {0, 0}}));
  lib.add_scenario(make_scenario("straight", {{0, 0}, {50, 0}}));

  // Noise densities from vendor datasheets / common calibration values;
  // the JSON preset files under config/imu carry the provenance notes.
  lib.add_imu(make_imu("adis16448", 2.0e-3, 1.7e-4, 3.0e-3, 1.9e-5));
  lib.add_imu(make_imu("mpu6000", 3.9e-3, 8.7e-5, 2.0e-2, 1.0e-4));
  // Synthetic coarse IMU for latency stress studies: the bias walk is
  // exaggerated so correction latency dominates short desk-scale runs.
  lib.add_imu(make_imu("stress200", 1.0e-3, 1.0e-4, 4.0, 2.0e-2));
  lib.add_imu(make_imu("ideal", 0.0, 0.0, 0.0, 0.0));

  // Method-like presets mirror the published latency ordering; drift
  // magnitudes are calibration knobs.
  lib.add_estimator(
      make_estimator("svo-like", 0.010, 0.008, 0.003, 0.008, 0.002));
  lib.add_estimator(
      make_estimator("msc-like", 0.017, 0.006, 0.0025, 0.008, 0.002));
  lib.add_estimator(
      make_estimator("gf-like", 0.030, 0.002, 0.0008, 0.005, 0.001));
  lib.add_estimator(
      make_estimator("orb-like", 0.052, 0.0025, 0.001, 0.005, 0.001));
  lib.add_estimator(
      make_estimator("vins-like", 0.065, 0.005, 0.002, 0.008, 0.002));

  // Corner presets for the drift/latency tradeoff study.
  lib.add_estimator(
      make_estimator("lo-lat-hi-drift", 0.010, 0.020, 0.003, 0.005, 0.001));
  lib.add_estimator(
      make_estimator("hi-lat-lo-drift", 0.100, 0.0005, 0.0002, 0.005, 0.001));
  lib.add_estimator(
      make_estimator("hi-lat-hi-drift", 0.100, 0.020, 0.003, 0.005, 0.001));

  lib.add_estimator(make_estimator("zero-error", 0.0, 0.0, 0.0, 0.0, 0.0));
  EstimatorConfig gt;
  gt.name = "ground-truth";
  gt.mode = EstimatorMode::ground_truth;
  gt.latency = 0.0;
  lib.add_estimator(gt);

  return lib;
}

WaypointList load_scenario_file(const std::string& path) {
  const json j = read_json(path);
  WaypointList wp;
  try {
    wp.name = j.at("name").get<std::string>();
    for (const auto& p : j.at("waypoints")) {
      wp.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return wp;
}

ImuModel load_imu_file(const std::string& path) {
  const json j = read_json(path);
  ImuModel m;
  try {
    m.name = j.at("name").get<std::string>();
    m.accel_noise_density = j.at("accel_noise_density").get<double>();
    m.gyro_noise_density = j.at("gyro_noise_density").get<double>();
    m.accel_bias_rw = j.at("accel_bias_rw").get<double>();
    m.gyro_bias_rw = j.at("gyro_bias_rw").get<double>();
    m.rate = j.value("rate", 200.0);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return m;
}

EstimatorConfig load_estimator_file(const std::string& path) {
  const json j = read_json(path);
  EstimatorConfig e;
  try {
    e.name = j.at("name").get<std::string>();
    const std::string mode = j.value("mode", "closed_loop_estimate");
    if (mode == "ground_truth") {
      e.mode = EstimatorMode::ground_truth;
    } else if (mode == "closed_loop_estimate") {
      e.mode = EstimatorMode::closed_loop_estimate;
    } else {
      throw ConfigError(path + ": unknown mode '" + mode + "'");
    }
    e.latency = j.value("latency", 0.0);
    e.output_rate = j.value("output_rate", 50.0);
    e.drift_rate_trans = j.value("drift_rate_trans", 0.0);
    e.drift_rate_rot = j.value("drift_rate_rot", 0.0);
    e.fix_noise_trans = j.value("fix_noise_trans", 0.0);
    e.fix_noise_rot = j.value("fix_noise_rot", 0.0);
    e.latency_jitter = j.value("latency_jitter", false);
  } catch (const json::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  return e;
}

void Library::load_config_dir(const std::string& dir) {
  auto load_all = [&](const std::string& sub, auto loader, auto adder) {
    const fs::path p = fs::path(dir) / sub;
    if (!fs::is_directory(p)) return;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(p)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) adder(loader(f.string()));
  };
  load_all("scenarios", load_scenario_file,
           [&](const WaypointList& wp) { add_scenario(wp); });
  load_all("imu", load_imu_file, [&](const ImuModel& m) { add_imu(m); });
  load_all("estimators", load_estimator_file,
           [&](const EstimatorConfig& e) { add_estimator(e); });
}

const WaypointList& Library::scenario(const std::string& name) const {
  auto it = scenarios_.find(name);
  if (it == scenarios_.end()) throw ConfigError("unknown scenario: " + name);
  return it->second;
}

const ImuModel& Library::imu(const std::string& name) const {
  auto it = imus_.find(name);
  if (it == imus_.end()) throw ConfigError("unknown IMU preset: " + name);
  return it->second;
}

const EstimatorConfig& Library::estimator(const std::string& name) const {
  auto it = estimators_.find(name);
  if (it == estimators_.end()) {
    throw ConfigError("unknown estimator preset: " + name);
  }
  return it->second;
}

std::vector<std::string> Library::scenario_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : scenarios_) out.push_back(k);
  return out;
}

std::vector<std::string> Library::imu_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : imus_) out.push_back(k);
  return out;
}

std::vector<std::string> Library::estimator_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : estimators_) out.push_back(k);
  return out;
}

}  // namespace clbench
