#include <doctest.h>

#include <random>

#include "clbench/controller.hpp"
#include "clbench/errors.hpp"
#include "clbench/trajectory.hpp"

using namespace clbench;

namespace {

// Independent dense-matrix transcription of the flat tracking law used
// as an oracle against flat_control.
struct M2 {
  double a, b, c, d;  // row-major 2x2
  Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  M2 inv() const {
    const double det = a * d - b * c;
    return {d / det, -b / det, -c / det, a / det};
  }
  M2 sub(const M2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
};

ControlAccel oracle_flat(const Pose2& g, const BodyVelocity& V,
                         const OffsetState& off, const Vec2& d_star,
                         const Vec2& d_star_dot, const FlatGains& k) {
  const double lam = off.lambda, ld = off.lambda_dot;
  const double c = std::cos(g.theta), s = std::sin(g.theta);
  const M2 R{c, -s, s, c};
  const M2 R_lam{c, -s * lam, s, c * lam};  // R * diag(1, lambda)
  const M2 R_lam_inv = R_lam.inv();
  const M2 omega_hat{0.0, -lam * V.omega, V.omega / lam, ld / lam};
  const M2 I{1, 0, 0, 1};
  const Vec2 e1{1, 0};
  const Vec2 Vv{V.nu, V.omega};

  const Vec2 d{g.x, g.y};
  const Vec2 t1 = k.c_p * R_lam_inv.apply(d_star - d - lam * R.apply(e1));
  const Vec2 t2 = k.c_d * (R_lam_inv.apply(d_star_dot) - Vv);
  const Vec2 t3 = (-k.c_d * ld) * e1;
  const Vec2 t4 = -1.0 * omega_hat.apply(Vv);
  const M2 m5 = omega_hat.sub({k.c_lambda, 0, 0, k.c_lambda});
  const Vec2 t5 = -1.0 * m5.apply(ld * e1);
  const Vec2 u = t1 + t2 + t3 + t4 + t5;
  return {u.x, u.y};
}

}  // namespace

TEST_CASE("flat_control spec cases") {
  FlatGains k;
  k.c_p = 1.0;
  k.c_d = 1.0;
  // Virtual point exactly on target, everything at rest: no action.
  ControlAccel u = flat_control({0, 0, 0}, {0, 0}, {1.0, 0.0}, {1, 0}, {0, 0}, k);
  CHECK(u.u1 == doctest::Approx(0.0));
  CHECK(u.u2 == doctest::Approx(0.0));
  // Target one meter past the virtual point.
  u = flat_control({0, 0, 0}, {0, 0}, {1.0, 0.0}, {2, 0}, {0, 0}, k);
  CHECK(u.u1 == doctest::Approx(1.0));
  CHECK(u.u2 == doctest::Approx(0.0));
  // Lateral target.
  k.c_p = 2.0;
  u = flat_control({0, 0, 0}, {0, 0}, {0.5, 0.0}, {0.5, 0.5}, {0, 0}, k);
  CHECK(u.u1 == doctest::Approx(0.0));
  CHECK(u.u2 == doctest::Approx(2.0));
}

TEST_CASE("flat_control matches dense-matrix oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> vel(-2.0, 2.0);
  std::uniform_real_distribution<double> lam(0.02, 1.0);
  std::uniform_real_distribution<double> gain(0.2, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const Pose2 g{pos(rng), pos(rng), ang(rng)};
    const BodyVelocity V{vel(rng), vel(rng)};
    const OffsetState off{lam(rng), vel(rng)};
    const Vec2 ds{pos(rng), pos(rng)};
    const Vec2 dsd{vel(rng), vel(rng)};
    FlatGains k;
    k.c_p = gain(rng);
    k.c_d = gain(rng);
    k.c_lambda = gain(rng);
    const ControlAccel u = flat_control(g, V, off, ds, dsd, k);
    const ControlAccel o = oracle_flat(g, V, off, ds, dsd, k);
    CHECK(std::abs(u.u1 - o.u1) < 1e-10);
    CHECK(std::abs(u.u2 - o.u2) < 1e-10);
  }
}

TEST_CASE("flat_control rejects a singular offset") {
  CHECK_THROWS_AS(
      flat_control({0, 0, 0}, {0, 0}, {1e-10, 0.0}, {1, 0}, {0, 0}, {}),
      SingularOffset);
}

TEST_CASE("step_offset closed form") {
  FlatGains k;
  k.epsilon = 0.1;
  k.c_lambda = 1.0;
  // Fixed point.
  const OffsetState fixed = step_offset({0.1, 0.0}, k, 1.0);
  CHECK(fixed.lambda == doctest::Approx(0.1));
  CHECK(fixed.lambda_dot == doctest::Approx(0.0));
  // lambda(1) = eps + (1 - eps) e^-1.
  const OffsetState one = step_offset({1.0, -0.9}, k, 1.0);
  CHECK(one.lambda == doctest::Approx(0.1 + 0.9 * std::exp(-1.0)).epsilon(1e-9));

  // Randomized analytic solution and semigroup property.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uni(0.1, 3.0);
  for (int i = 0; i < 500; ++i) {
    FlatGains kk;
    kk.epsilon = uni(rng) * 0.1;
    kk.c_lambda = uni(rng);
    const double lam0 = kk.epsilon + uni(rng);
    const double t = uni(rng);
    const OffsetState big = step_offset({lam0, 0.0}, kk, t);
    const double analytic = kk.epsilon + (lam0 - kk.epsilon) * std::exp(-kk.c_lambda * t);
    CHECK(std::abs(big.lambda - analytic) < 1e-9);
    CHECK(big.lambda_dot ==
          doctest::Approx(-kk.c_lambda * (big.lambda - kk.epsilon)));

    OffsetState iter{lam0, 0.0};
    for (int j = 0; j < 64; ++j) iter = step_offset(iter, kk, t / 64.0);
    CHECK(std::abs(iter.lambda - big.lambda) < 1e-9);
  }
}

TEST_CASE("velocity_command fixed point and formula") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const Pose2 g{uni(rng), uni(rng), uni(rng)};
    const BodyVelocity vs{uni(rng), uni(rng)};
    TrackingGains k;
    k.k_x = std::abs(uni(rng)) + 0.1;
    k.k_y = std::abs(uni(rng)) + 0.1;
    k.k_theta = std::abs(uni(rng)) + 0.1;
    const BodyVelocity cmd = velocity_command(g, g, vs, k);
    CHECK(cmd.nu == vs.nu);
    CHECK(cmd.omega == vs.omega);
  }

  TrackingGains k;  // k_x = 1.5, k_y = 2.0, k_theta = 3.0
  BodyVelocity c = velocity_command({0, 0, 0}, {0, 0.1, 0}, {1, 0}, k);
  CHECK(c.nu == doctest::Approx(1.0));
  CHECK(c.omega == doctest::Approx(0.2));
  c = velocity_command({0, 0, 0}, {0.2, 0, -0.1}, {0.5, 0}, k);
  CHECK(c.nu == doctest::Approx(0.8));
  CHECK(c.omega == doctest::Approx(-0.3));
}

TEST_CASE("velocity_command clamps to the vehicle envelope") {
  VehicleLimits lim;
  const BodyVelocity c =
      velocity_command({0, 0, 0}, {100, 50, 1.0}, {0, 0}, {}, lim);
  CHECK(c.nu == lim.v_max);
  CHECK(c.omega == lim.omega_max);
}

TEST_CASE("reference converges to cruise on a straight segment") {
  const WaypointList wp{"line", {{0, 0}, {50, 0}}};
  const DesiredTrajectory traj = DesiredTrajectory::fit(wp, 1.0, {});
  const FlatGains gains;
  const ReferenceTrajectory ref =
      generate_reference(traj, gains, {0, 0, 0}, 50.0, 2.0);
  CHECK(ref.duration() >= traj.duration());
  // Mid-cruise the reference speed matches the desired speed within 1%.
  for (double t : {20.0, 25.0, 30.0}) {
    const ReferenceSample& s = ref.at_time(t);
    CHECK(s.vel.nu == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::abs(s.vel.omega) < 0.01);
    CHECK(std::abs(s.pose.y) < 0.01);
  }
  // The reference parks near the endpoint.
  const ReferenceSample& end = ref.at_time(ref.duration());
  CHECK(std::abs(end.vel.nu) < 0.01);
  CHECK(end.pose.x == doctest::Approx(50.0).epsilon(0.01));
}

TEST_CASE("at_time clamps and snaps to the grid") {
  ReferenceTrajectory ref;
  ref.dt = 0.5;
  ref.samples = {{{0, 0, 0}, {0, 0}}, {{1, 0, 0}, {1, 0}}, {{2, 0, 0}, {2, 0}}};
  CHECK(ref.at_time(-1.0).pose.x == 0.0);
  CHECK(ref.at_time(0.6).pose.x == 1.0);
  CHECK(ref.at_time(10.0).pose.x == 2.0);
  CHECK(ref.duration() == doctest::Approx(1.0));
}
