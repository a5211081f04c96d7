#include "clbench/controller.hpp"

#include <algorithm>
#include <cmath>

#include "clbench/errors.hpp"

namespace clbench {

ControlAccel flat_control(const Pose2& g, const BodyVelocity& V,
                          const OffsetState& off, const Vec2& d_star,
                          const Vec2& d_star_dot, const FlatGains& gains) {
  const double lam = off.lambda;
  const double lam_dot = off.lambda_dot;
  if (lam < 1e-9) {
    throw SingularOffset("offset lambda below 1e-9, R_lambda not invertible");
  }
  const double c = std::cos(g.theta);
  const double s = std::sin(g.theta);

  // R_lambda^-1 v = diag(1, 1/lambda) R^T v
  auto r_lambda_inv = [&](const Vec2& v) -> Vec2 {
    return {c * v.x + s * v.y, (-s * v.x + c * v.y) / lam};
  };
  // omega-hat(lambda, lambda-dot) applied to a vector
  auto omega_hat = [&](double a, double b) -> Vec2 {
    return {-lam * V.omega * b, (V.omega / lam) * a + (lam_dot / lam) * b};
  };

  const Vec2 pos_err{d_star.x - g.x - lam * c, d_star.y - g.y - lam * s};
  const Vec2 t1 = r_lambda_inv(pos_err) * gains.c_p;

  const Vec2 ff = r_lambda_inv(d_star_dot);
  const Vec2 t2{gains.c_d * (ff.x - V.nu), gains.c_d * (ff.y - V.omega)};

  const Vec2 t3{-gains.c_d * lam_dot, 0.0};
  const Vec2 t4 = omega_hat(V.nu, V.omega) * -1.0;
  const Vec2 wh_e1 = omega_hat(1.0, 0.0);
  const Vec2 t5{-(wh_e1.x - gains.c_lambda) * lam_dot, -wh_e1.y * lam_dot};

  return {t1.x + t2.x + t3.x + t4.x + t5.x,
          t1.y + t2.y + t3.y + t4.y + t5.y};
}

OffsetState step_offset(const OffsetState& off, const FlatGains& gains,
                        double dt) {
  const double decay = std::exp(-gains.c_lambda * dt);
  OffsetState next;
  next.lambda = gains.epsilon + (off.lambda - gains.epsilon) * decay;
  next.lambda_dot = -gains.c_lambda * (next.lambda - gains.epsilon);
  return next;
}

const ReferenceSample& ReferenceTrajectory::at_time(double t) const {
  const auto n = static_cast<long>(samples.size());
  long i = std::lround(t / dt);
  i = std::clamp(i, 0l, n - 1);
  return samples[static_cast<std::size_t>(i)];
}

ReferenceTrajectory generate_reference(const DesiredTrajectory& traj,
                                       const FlatGains& gains, const Pose2& g0,
                                       double rate, double tail) {
  ReferenceTrajectory ref;
  ref.dt = 1.0 / rate;
  const double horizon = traj.duration() + tail;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon * rate));
  ref.samples.reserve(steps + 1);

  Pose2 g = g0;
  BodyVelocity v;
  OffsetState off = OffsetState::initial(gains);

  const double err0 = (traj.eval(0.0).pos - g0.position()).norm();
  const double diverge_limit = 10.0 * std::max(err0, 0.5);
  double diverge_since = -1.0;

  // The flat dynamics are stiff once lambda has decayed (terms scale
  // with nu/lambda), so integrate on a 1 ms substep and record at the
  // output rate.
  const int n_sub = std::max(1, static_cast<int>(std::ceil(ref.dt / 1e-3)));
  const double h = ref.dt / n_sub;

  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * ref.dt;
    ref.samples.push_back({g, v});

    for (int j = 0; j < n_sub; ++j) {
      const double tj = t + j * h;
      if (tj < traj.duration()) {
        const TrajSample d = traj.eval(tj);
        const ControlAccel u = flat_control(g, v, off, d.pos, d.vel, gains);
        v.nu += u.u1 * h;
        v.omega += u.u2 * h;
      } else {
        // Desired path is at rest; park instead of chasing the virtual
        // point (which would spin in place around the endpoint).
        const double damp = std::exp(-8.0 * h);
        v.nu *= damp;
        v.omega *= damp;
      }
      g = advance_twist(g, v.nu, v.omega, h);
      off = step_offset(off, gains, h);
    }

    const double err = (traj.eval(t + ref.dt).pos - g.position()).norm();
    if (err > diverge_limit) {
      if (diverge_since < 0.0) diverge_since = t;
      if (t - diverge_since > 2.0) {
        throw IntegrationDiverged("reference integration diverged at t=" +
                                  std::to_string(t));
      }
    } else {
      diverge_since = -1.0;
    }
  }
  return ref;
}

BodyVelocity velocity_command(const Pose2& g_est, const Pose2& g_ref,
                              const BodyVelocity& v_ref,
                              const TrackingGains& k,
                              const std::optional<VehicleLimits>& limits) {
  const PoseError e = relative_error(g_est, g_ref);
  BodyVelocity cmd{k.k_x * e.x + v_ref.nu,
                   k.k_theta * e.theta + k.k_y * e.y + v_ref.omega};
  if (limits) {
    cmd.nu = std::clamp(cmd.nu, -limits->v_max, limits->v_max);
    cmd.omega = std::clamp(cmd.omega, -limits->omega_max, limits->omega_max);
  }
  return cmd;
}

}  // namespace clbench
