#pragma once

#include <random>
#include <string>
#include <vector>

#include "clbench/vehicle.hpp"

namespace clbench {

// Planar IMU noise model. The vehicle is planar, so the model carries
// body-frame x/y accelerometers and the yaw gyro only.
struct ImuModel {
  std::string name = "custom";
  double accel_noise_density = 0.0;  // (m/s^2)/sqrt(Hz)
  double gyro_noise_density = 0.0;   // (rad/s)/sqrt(Hz)
  double accel_bias_rw = 0.0;        // (m/s^3)/sqrt(Hz)
  double gyro_bias_rw = 0.0;         // (rad/s^2)/sqrt(Hz)
  double rate = 200.0;               // Hz
};

struct ImuBias {
  double ax = 0.0;
  double ay = 0.0;
  double gyro = 0.0;
};

struct ImuReading {
  double t = 0.0;   // end of the sample interval
  double ax = 0.0;  // m/s^2, body frame
  double ay = 0.0;
  double gyro = 0.0;  // rad/s yaw rate
};

// One IMU sample over the interval between two consecutive truth states.
// Advances the bias random walk, then reports truth + bias + white noise.
ImuReading imu_sample(const VehicleState& prev, const VehicleState& next,
                      const ImuModel& model, ImuBias& bias,
                      std::mt19937_64& rng);

struct CameraSchedule {
  double rate = 30.0;       // Hz
  double first_frame = 0.0; // s
};

// Uniform capture grid over [first_frame, horizon].
std::vector<double> frame_times(const CameraSchedule& sched, double horizon);

}  // namespace clbench
