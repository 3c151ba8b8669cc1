#include "mvam/dynamics.hpp"

#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "mvam/error.hpp"
#include "mvam/stability.hpp"

namespace mvam {

std::string joint_name(std::size_t joint) {
  const Leg leg = kAllLegs.at(joint / 2);
  return fmt::format("{}_{}", leg_name(leg), is_knee_joint(joint) ? "knee" : "hip");
}

Wrench required_net_wrench(const BodyParams& body, const ComReference& reference) {
  Wrench w;
  w.force = body.mass * (reference.acceleration + Vec2{0.0, kGravity});
  // Zero-pitch straight-line references have no angular acceleration.
  w.moment = 0.0;
  return w;
}

std::array<std::optional<Vec2>, kLegCount> stance_feet_at(const GaitPlan& plan, double t) {
  std::array<std::optional<Vec2>, kLegCount> feet;
  for (Leg leg : kAllLegs) {
    const FootReference f = foot_reference(plan, leg, t);
    if (f.stance) feet[index(leg)] = f.position;
  }
  return feet;
}

DynamicsSample inverse_dynamics_at(const BodyParams& body, const GaitPlan& plan, double t,
                                   const std::array<std::optional<Vec2>, kLegCount>& stance_feet,
                                   double mu) {
  const ComReference ref = com_reference(plan, t);
  const Wrench wrench = required_net_wrench(body, ref);

  std::vector<Vec2> feet;
  std::vector<Leg> owners;
  for (Leg leg : kAllLegs) {
    if (const auto& f = stance_feet[index(leg)]) {
      feet.push_back(*f);
      owners.push_back(leg);
    }
  }
  const std::vector<ContactForce> forces = distribute_contact_forces(wrench, feet, ref.position, mu);

  DynamicsSample out;
  out.state.position = ref.position;
  out.state.velocity = ref.velocity;
  for (std::size_t k = 0; k < owners.size(); ++k) out.contact_force[index(owners[k])] = forces[k].force;

  const double l = body.geometry.leg_link_length;
  const KneeDirection knee = body.geometry.knee;
  for (Leg leg : kAllLegs) {
    const std::size_t i = index(leg);
    const Vec2 hip = ref.position + plan.hip_from_com[i];
    const Vec2 hip_velocity = ref.velocity;
    Vec2 foot;
    Vec2 foot_velocity;
    const bool stance = stance_feet[i].has_value();
    if (stance) {
      foot = *stance_feet[i];
    } else {
      const FootReference f = foot_reference(plan, leg, t);
      foot = f.position;
      foot_velocity = f.velocity;
    }
    const LegConfig config = leg_ik(hip, foot, l);
    const LegRates rates = leg_rates(foot - hip, foot_velocity - hip_velocity, config, l, knee);
    out.state.legs[i] = {config.phi, config.ell, stance};
    out.rate[hip_joint(leg)] = rates.hip;
    out.rate[knee_joint(leg)] = rates.knee;
    if (stance) {
      // The foot pushes on the ground with the opposite of the reaction.
      const JointTorques tau = joint_torques_from_foot_force(config, -out.contact_force[i], l, knee);
      out.torque[hip_joint(leg)] = tau.hip;
      out.torque[knee_joint(leg)] = tau.knee;
    }
  }

  std::vector<double> xs;
  xs.reserve(feet.size());
  for (const auto& f : feet) xs.push_back(f.x);
  out.margin = sagittal_margin(ref.position.x, xs).margin;
  return out;
}

std::size_t step_count(double duration, double dt) {
  if (!(dt > 0.0)) throw ConfigError(fmt::format("time step must be positive, got {}", dt));
  if (!(duration > 0.0)) throw ConfigError(fmt::format("duration must be positive, got {}", duration));
  const double ratio = duration / dt;
  const auto n = static_cast<std::size_t>(std::llround(ratio));
  if (n == 0 || std::abs(static_cast<double>(n) - ratio) > 1e-6) {
    throw ConfigError(fmt::format("time step {} s does not divide duration {} s", dt, duration));
  }
  return n;
}

namespace {

void append_sample(DynamicsTrace& trace, double t, const DynamicsSample& s) {
  trace.states.time.push_back(t);
  trace.states.states.push_back(s.state);
  trace.torques.time.push_back(t);
  trace.torques.torque.push_back(s.torque);
  trace.torques.rate.push_back(s.rate);
  trace.contact_forces.push_back(s.contact_force);
  trace.margin.push_back(s.margin);
}

}  // namespace

DynamicsTrace inverse_dynamics_trace(const BodyParams& body, const GaitPlan& plan, double dt,
                                     double mu) {
  const std::size_t n = step_count(plan.period, dt);
  DynamicsTrace trace;
  trace.states.dt = dt;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt;
    try {
      append_sample(trace, t, inverse_dynamics_at(body, plan, t, stance_feet_at(plan, t), mu));
    } catch (const Error& e) {
      std::throw_with_nested(TimedError(t, fmt::format("inverse dynamics failed at t = {} s: {}", t, e.what())));
    }
  }
  return trace;
}

}  // namespace mvam
