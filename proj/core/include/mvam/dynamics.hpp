#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mvam/contact.hpp"
#include "mvam/gait.hpp"
#include "mvam/kinematics.hpp"
#include "mvam/morphology.hpp"

namespace mvam {

// Eight actuated sagittal joints: per leg a hip and a knee. The hip frontal
// actuators carry no load in the planar model and are not traced.
inline constexpr std::size_t kJointCount = 2 * kLegCount;
constexpr std::size_t hip_joint(Leg leg) noexcept { return 2 * index(leg); }
constexpr std::size_t knee_joint(Leg leg) noexcept { return 2 * index(leg) + 1; }
constexpr bool is_knee_joint(std::size_t joint) noexcept { return joint % 2 == 1; }
std::string joint_name(std::size_t joint);  // "fl_hip", "fl_knee", ...

using JointArray = std::array<double, kJointCount>;

struct LegState {
  double phi = 0.0;
  double ell = 0.0;
  bool stance = false;
};

struct PlanarState {
  Vec2 position;       // COM, m
  double pitch = 0.0;  // rad, nose up positive
  Vec2 velocity;
  double pitch_rate = 0.0;
  std::array<LegState, kLegCount> legs{};
};

struct StateTrace {
  double dt = 0.0;
  std::vector<double> time;
  std::vector<PlanarState> states;
};

// Joint torques and the matching joint rates on the same grid as a StateTrace.
struct TorqueTrace {
  std::vector<double> time;
  std::vector<JointArray> torque;  // N m
  std::vector<JointArray> rate;    // rad/s
};

// Everything produced on one time grid by either dynamics path.
struct DynamicsTrace {
  StateTrace states;
  TorqueTrace torques;
  std::vector<std::array<Vec2, kLegCount>> contact_forces;  // ground on robot; zero in swing
  std::vector<double> margin;                               // sagittal stability margin, m
};

inline constexpr double kDefaultDt = 1e-3;

// Newton-Euler requirement for the reference motion: m (a + g z), Ib theta_dd.
Wrench required_net_wrench(const BodyParams& body, const ComReference& reference);

struct DynamicsSample {
  PlanarState state;
  JointArray torque{};
  JointArray rate{};
  std::array<Vec2, kLegCount> contact_force{};
  double margin = 0.0;
};

// Inverse dynamics of the reference at time t with an explicit support set.
// `stance_feet[i]` holds the foothold of leg i when it carries load.
DynamicsSample inverse_dynamics_at(const BodyParams& body, const GaitPlan& plan, double t,
                                   const std::array<std::optional<Vec2>, kLegCount>& stance_feet,
                                   double mu = kDefaultFriction);

// Stance footholds at t under the closed stance convention of stance_mask.
std::array<std::optional<Vec2>, kLegCount> stance_feet_at(const GaitPlan& plan, double t);

// One gait period sampled at dt (period / dt + 1 samples). Failures are
// rethrown nested inside a TimedError carrying the grid time.
DynamicsTrace inverse_dynamics_trace(const BodyParams& body, const GaitPlan& plan,
                                     double dt = kDefaultDt, double mu = kDefaultFriction);

// Number of dt steps in `duration`; throws ConfigError when dt does not divide it.
std::size_t step_count(double duration, double dt);

struct ControllerGains {
  double kp = 100.0;  // N m / rad
  double kd = 5.0;    // N m s / rad
};

struct RigidState {
  Vec2 position;
  double pitch = 0.0;
  Vec2 velocity;
  double pitch_rate = 0.0;
};

struct SimulationOptions {
  ControllerGains gains;
  double t_end = 0.0;
  double dt = kDefaultDt;
  double mu = kDefaultFriction;
  bool feedforward = true;
  // When false the torso flies with no ground contact and no leg torques.
  bool contacts = true;
  std::optional<RigidState> initial;  // defaults to the reference at t = 0
  double divergence_bound = 0.5;      // m from the COM reference
};

// Planar torso on massless legs: stance feet are pinned at their footholds,
// joint PD tracking plus inverse-dynamics feedforward, fixed-step RK4.
// Throws InstabilityError with the failure time.
DynamicsTrace forward_simulate(const BodyParams& body, const GaitPlan& plan,
                               const SimulationOptions& options);

}  // namespace mvam
