#pragma once

#include <map>
#include <string>
#include <vector>

#include "clbench/estimator.hpp"
#include "clbench/sensors.hpp"
#include "clbench/trajectory.hpp"

namespace clbench {

// Built-in scenarios, IMU models and estimator presets, plus loaders
// for the JSON preset files. Files with a name matching a built-in
// replace it.
class Library {
 public:
  static Library builtin();

  // Loads every *.json under dir/scenarios, dir/imu, dir/estimators.
  void load_config_dir(const std::string& dir);

  void add_scenario(const WaypointList& wp) { scenarios_[wp.name] = wp; }
  void add_imu(const ImuModel& m) { imus_[m.name] = m; }
  void add_estimator(const EstimatorConfig& e) { estimators_[e.name] = e; }

  const WaypointList& scenario(const std::string& name) const;
  const ImuModel& imu(const std::string& name) const;
  const EstimatorConfig& estimator(const std::string& name) const;

  std::vector<std::string> scenario_names() const;
  std::vector<std::string> imu_names() const;
  std::vector<std::string> estimator_names() const;

 private:
  std::map<std::string, WaypointList> scenarios_;
  std::map<std::string, ImuModel> imus_;
  std::map<std::string, EstimatorConfig> estimators_;
};

WaypointList load_scenario_file(const std::string& path);
ImuModel load_imu_file(const std::string& path);
EstimatorConfig load_estimator_file(const std::string& path);

}  // namespace clbench
