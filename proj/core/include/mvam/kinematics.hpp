#pragma once

#include "mvam/morphology.hpp"
#include "mvam/vec2.hpp"

namespace mvam {

// Massless two-link leg (thigh and shank of equal length l) reduced to polar
// coordinates about the hip: leg angle phi from straight down (positive when the
// foot is ahead of the hip), leg length ell = 2 l sin(q / 2), knee angle q in
// (0, pi] with pi the straight leg.
struct LegConfig {
  double phi = 0.0;
  double ell = 0.0;
  double knee = 0.0;
};

struct LegRates {
  double phi = 0.0;
  double ell = 0.0;
  double knee = 0.0;
  double hip = 0.0;  // rate of the hip actuator coordinate (see hip_joint_angle)
};

struct JointTorques {
  double hip = 0.0;
  double knee = 0.0;
};

// Throws WorkspaceError unless 0 < |foot - hip| < 2 l.
LegConfig leg_ik(const Vec2& hip, const Vec2& foot, double link_length);

Vec2 leg_fk(const Vec2& hip, const LegConfig& config);

// Actuated hip coordinate: phi itself for the polar leg, the thigh angle
// phi + kappa (pi - q) / 2 for a serial leg.
double hip_joint_angle(const LegConfig& config, KneeDirection knee);

// Joint rates from the foot velocity relative to the hip. `leg` is foot - hip.
LegRates leg_rates(const Vec2& leg, const Vec2& leg_velocity, const LegConfig& config,
                   double link_length, KneeDirection knee);

// Static map from the force the foot applies to the ground to the joint
// torques holding it, tau = J^T f. With f split into tangential f_t and axial
// f_a components in the leg frame:
//   tau_hip  = f_t ell
//   tau_knee = f_a l cos(q / 2) + kappa f_t ell / 2
// kappa = 0 for the polar leg. Throws SingularityError on a straight leg
// carrying axial load.
JointTorques joint_torques_from_foot_force(const LegConfig& config, const Vec2& foot_force,
                                           double link_length,
                                           KneeDirection knee = KneeDirection::Polar);

// Inverse of the static map, f = J^{-T} tau. Throws SingularityError near q = pi.
Vec2 foot_force_from_joint_torques(const LegConfig& config, const JointTorques& torques,
                                   double link_length, KneeDirection knee);

struct LegFrame {
  Vec2 axial;       // unit vector hip -> foot
  Vec2 tangential;  // d(axial)/d(phi)
};

LegFrame leg_frame(double phi) noexcept;

}  // namespace mvam
