#include "clbench/sensors.hpp"

#include <cmath>

namespace clbench {

ImuReading imu_sample(const VehicleState& prev, const VehicleState& next,
                      const ImuModel& model, ImuBias& bias,
                      std::mt19937_64& rng) {
  const double dt = next.t - prev.t;
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double sq_dt = std::sqrt(dt);
  bias.ax += gauss(rng) * model.accel_bias_rw * sq_dt;
  bias.ay += gauss(rng) * model.accel_bias_rw * sq_dt;
  bias.gyro += gauss(rng) * model.gyro_bias_rw * sq_dt;

  // Velocity is piecewise constant between command updates, so the
  // interval kinematics are those of `next`.
  const double true_ax = (next.vel.nu - prev.vel.nu) / dt;
  const double true_ay = next.vel.omega * next.vel.nu;  // centripetal
  const double true_gyro = next.vel.omega;

  const double accel_sigma = model.accel_noise_density * std::sqrt(model.rate);
  const double gyro_sigma = model.gyro_noise_density * std::sqrt(model.rate);

  ImuReading r;
  r.t = next.t;
  r.ax = true_ax + bias.ax + gauss(rng) * accel_sigma;
  r.ay = true_ay + bias.ay + gauss(rng) * accel_sigma;
  r.gyro = true_gyro + bias.gyro + gauss(rng) * gyro_sigma;
  return r;
}

std::vector<double> frame_times(const CameraSchedule& sched, double horizon) {
  std::vector<double> out;
  const double period = 1.0 / sched.rate;
  for (long k = 0;; ++k) {
    const double t = sched.first_frame + static_cast<double>(k) * period;
    if (t > horizon + 1e-12) break;
    out.push_back(t);
  }
  return out;
}

}  // namespace clbench
