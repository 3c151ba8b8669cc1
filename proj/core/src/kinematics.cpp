#include "mvam/kinematics.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mvam/error.hpp"

namespace mvam {

namespace {
constexpr double kSingularTol = 1e-12;
}

LegFrame leg_frame(double phi) noexcept {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return {{s, -c}, {c, s}};
}

LegConfig leg_ik(const Vec2& hip, const Vec2& foot, double link_length) {
  const Vec2 d = foot - hip;
  const double ell = norm(d);
  if (!(ell > 0.0) || ell >= 2.0 * link_length) {
    throw WorkspaceError(fmt::format("foot at distance {} m from the hip is outside the open "
                                     "workspace (0, {}) m",
                                     ell, 2.0 * link_length));
  }
  LegConfig c;
  c.ell = ell;
  c.phi = std::atan2(d.x, -d.y);
  c.knee = 2.0 * std::asin(ell / (2.0 * link_length));
  return c;
}

Vec2 leg_fk(const Vec2& hip, const LegConfig& config) {
  return hip + config.ell * leg_frame(config.phi).axial;
}

double hip_joint_angle(const LegConfig& config, KneeDirection knee) {
  return config.phi + knee_kappa(knee) * 0.5 * (std::numbers::pi - config.knee);
}

LegRates leg_rates(const Vec2& leg, const Vec2& leg_velocity, const LegConfig& config,
                   double link_length, KneeDirection knee) {
  LegRates r;
  const double ell2 = dot(leg, leg);
  r.ell = dot(leg, leg_velocity) / config.ell;
  // phi = atan2(dx, -dz)
  r.phi = (-leg.y * leg_velocity.x + leg.x * leg_velocity.y) / ell2;
  const double dell_dq = link_length * std::cos(0.5 * config.knee);
  if (dell_dq < kSingularTol) throw SingularityError("knee rate undefined on a straight leg");
  r.knee = r.ell / dell_dq;
  r.hip = r.phi - knee_kappa(knee) * 0.5 * r.knee;
  return r;
}

JointTorques joint_torques_from_foot_force(const LegConfig& config, const Vec2& foot_force,
                                           double link_length, KneeDirection knee) {
  const LegFrame frame = leg_frame(config.phi);
  const double f_axial = dot(foot_force, frame.axial);
  const double f_tan = dot(foot_force, frame.tangential);
  const double dell_dq = link_length * std::cos(0.5 * config.knee);
  if (std::abs(dell_dq) < kSingularTol && std::abs(f_axial) > kSingularTol) {
    throw SingularityError(
        fmt::format("straight leg (q = {}) cannot map axial force {} N to knee torque",
                    config.knee, f_axial));
  }
  JointTorques tau;
  tau.hip = f_tan * config.ell;
  tau.knee = f_axial * dell_dq + knee_kappa(knee) * 0.5 * f_tan * config.ell;
  return tau;
}

Vec2 foot_force_from_joint_torques(const LegConfig& config, const JointTorques& torques,
                                   double link_length, KneeDirection knee) {
  const double dell_dq = link_length * std::cos(0.5 * config.knee);
  if (dell_dq < kSingularTol || config.ell < kSingularTol) {
    throw SingularityError("foot force undefined at a singular leg configuration");
  }
  const double f_tan = torques.hip / config.ell;
  const double f_axial = (torques.knee - knee_kappa(knee) * 0.5 * f_tan * config.ell) / dell_dq;
  const LegFrame frame = leg_frame(config.phi);
  return f_axial * frame.axial + f_tan * frame.tangential;
}

}  // namespace mvam
