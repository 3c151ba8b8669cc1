#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mvam/dynamics.hpp"
#include "mvam/gait.hpp"
#include "mvam/morphology.hpp"

namespace mvam {

// Brushless motor behind a harmonic drive. Limits are joint-side.
struct ActuatorSpec {
  double kv = 400.0;             // rpm / V
  double resistance = 0.15;      // ohm, phase-to-phase winding
  double gear_ratio = 50.0;
  double torque_limit = 20.0;    // N m
  double speed_limit = 20.0;     // rad/s
  double efficiency = 0.85;      // gearbox, (0, 1]

  void validate(const std::string& name) const;
};

struct ActuatorSet {
  ActuatorSpec hip_sagittal{400.0, 0.15, 50.0, 20.0, 20.0, 0.85};
  ActuatorSpec knee{400.0, 0.15, 30.0, 12.0, 33.0, 0.85};
  // Present for completeness; it carries no load in the sagittal model and
  // never enters power totals or limit checks.
  ActuatorSpec hip_frontal{400.0, 0.15, 100.0, 20.0, 10.0, 0.85};

  const ActuatorSpec& for_joint(std::size_t joint) const noexcept {
    return is_knee_joint(joint) ? knee : hip_sagittal;
  }
  void validate() const;
};

// K_t = 60 / (2 pi KV), N m / A.
double motor_torque_constant(double kv);

struct PowerSplit {
  double mechanical = 0.0;  // max(tau omega, 0)
  double copper = 0.0;      // I^2 R
  double total() const noexcept { return mechanical + copper; }
};

PowerSplit power_split(const ActuatorSpec& spec, double torque, double rate);

// Electrical input power of one joint; negative work is not recovered.
double electrical_power(const ActuatorSpec& spec, double torque, double rate);

struct PowerTrace {
  std::vector<double> time;
  std::vector<JointArray> joint;     // W
  std::vector<double> total;         // W
  std::vector<double> mechanical;    // W
  std::vector<double> copper;        // W
};

PowerTrace power_trace(const TorqueTrace& torques, const ActuatorSet& actuators);

struct LimitViolation {
  double time = 0.0;
  std::size_t joint = 0;
  double torque = 0.0;
  double rate = 0.0;
  bool over_torque = false;
  bool over_speed = false;
};

struct FeasibilityReport {
  std::vector<LimitViolation> violations;
  bool feasible() const noexcept { return violations.empty(); }
};

// Every (t, joint) with |tau| or |omega| strictly above its limit.
FeasibilityReport check_torque_feasibility(const TorqueTrace& torques,
                                           const ActuatorSet& actuators);

struct PayloadOptions {
  Vec2 attach;          // torso frame, m
  double cap = 5.0;     // kg
  double dt = kDefaultDt;
  double mu = kDefaultFriction;
};

// True when the body with `added` kg at the attach point walks the gait
// within actuator limits. Planning or dynamics failures count as infeasible.
bool payload_feasible(const BodyParams& body, const GaitParams& gait, const ActuatorSet& actuators,
                      const PayloadOptions& options, double added);

// Largest feasible added mass, 1 g resolution, capped at options.cap.
// Throws MarginUndefinedError when the unloaded body is already infeasible.
double payload_margin(const BodyParams& body, const GaitParams& gait, const ActuatorSet& actuators,
                      const PayloadOptions& options = {});

}  // namespace mvam
