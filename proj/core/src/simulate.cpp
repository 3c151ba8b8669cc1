#include <cmath>

#include <fmt/format.h>

#include "mvam/dynamics.hpp"
#include "mvam/error.hpp"
#include "mvam/stability.hpp"

namespace mvam {

namespace {

using StanceFeet = std::array<std::optional<Vec2>, kLegCount>;

struct Derivative {
  Vec2 velocity;
  double pitch_rate = 0.0;
  Vec2 acceleration;
  double pitch_acceleration = 0.0;
};

RigidState advance(const RigidState& y, const Derivative& d, double h) {
  RigidState out = y;
  out.position += h * d.velocity;
  out.pitch += h * d.pitch_rate;
  out.velocity += h * d.acceleration;
  out.pitch_rate += h * d.pitch_acceleration;
  return out;
}

// Velocity of a point rigidly attached to the torso at world offset r.
Vec2 attached_velocity(const RigidState& y, const Vec2& r) {
  return y.velocity + y.pitch_rate * Vec2{-r.y, r.x};
}

class Simulator {
 public:
  Simulator(const BodyParams& body, const GaitPlan& plan, const SimulationOptions& options)
      : body_(body), plan_(plan), opt_(options) {}

  // State derivative at (t, y); fills `out` with the joint-level signals.
  Derivative evaluate(double t, const RigidState& y, const StanceFeet& feet, DynamicsSample& out) const {
    Derivative d;
    d.velocity = y.velocity;
    d.pitch_rate = y.pitch_rate;
    out = DynamicsSample{};
    out.state.position = y.position;
    out.state.pitch = y.pitch;
    out.state.velocity = y.velocity;
    out.state.pitch_rate = y.pitch_rate;

    Vec2 force{0.0, -body_.mass * kGravity};
    double moment = 0.0;
    if (!opt_.contacts) {
      d.acceleration = force * (1.0 / body_.mass);
      return d;
    }

    JointArray feedforward{};
    if (opt_.feedforward) feedforward = inverse_dynamics_at(body_, plan_, t, feet, opt_.mu).torque;

    const ComReference ref = com_reference(plan_, t);
    const double l = body_.geometry.leg_link_length;
    const KneeDirection knee = body_.geometry.knee;
    std::vector<double> support_x;
    for (Leg leg : kAllLegs) {
      const std::size_t i = index(leg);
      const Vec2 r = rotate(plan_.hip_from_com[i], y.pitch);
      const Vec2 hip = y.position + r;
      const Vec2 hip_velocity = attached_velocity(y, r);
      const bool stance = feet[i].has_value();
      Vec2 foot;
      Vec2 foot_velocity;
      if (stance) {
        foot = *feet[i];
      } else {
        const FootReference f = foot_reference(plan_, leg, t);
        foot = f.position;
        foot_velocity = f.velocity;
      }
      // Leg vector and its rate in the torso frame.
      const Vec2 leg_b = rotate(foot - hip, -y.pitch);
      const Vec2 leg_rate_b =
          rotate(foot_velocity - hip_velocity, -y.pitch) - y.pitch_rate * Vec2{-leg_b.y, leg_b.x};
      LegConfig config;
      LegRates rates;
      try {
        config = leg_ik({0.0, 0.0}, leg_b, l);
        rates = leg_rates(leg_b, leg_rate_b, config, l, knee);
      } catch (const Error& e) {
        throw InstabilityError(t, fmt::format("leg '{}' left its workspace at t = {} s: {}",
                                              leg_name(leg), t, e.what()));
      }
      out.state.legs[i] = {config.phi, config.ell, stance};
      out.rate[hip_joint(leg)] = rates.hip;
      out.rate[knee_joint(leg)] = rates.knee;
      if (!stance) continue;

      const Vec2 hip_ref = ref.position + plan_.hip_from_com[i];
      const LegConfig target = leg_ik(hip_ref, foot, l);
      const LegRates target_rates = leg_rates(foot - hip_ref, -ref.velocity, target, l, knee);
      JointTorques tau;
      tau.hip = feedforward[hip_joint(leg)] +
                opt_.gains.kp * (hip_joint_angle(target, knee) - hip_joint_angle(config, knee)) +
                opt_.gains.kd * (target_rates.hip - rates.hip);
      tau.knee = feedforward[knee_joint(leg)] + opt_.gains.kp * (target.knee - config.knee) +
                 opt_.gains.kd * (target_rates.knee - rates.knee);
      Vec2 grf;
      try {
        grf = -rotate(foot_force_from_joint_torques(config, tau, l, knee), y.pitch);
      } catch (const SingularityError& e) {
        throw InstabilityError(t, fmt::format("leg '{}' singular at t = {} s", leg_name(leg), t));
      }
      out.torque[hip_joint(leg)] = tau.hip;
      out.torque[knee_joint(leg)] = tau.knee;
      out.contact_force[i] = grf;
      force += grf;
      moment += cross(foot - y.position, grf);
      support_x.push_back(foot.x);
    }
    if (!support_x.empty()) out.margin = sagittal_margin(y.position.x, support_x).margin;
    d.acceleration = force * (1.0 / body_.mass);
    d.pitch_acceleration = moment / body_.inertia_sagittal;
    return d;
  }

  void check(double t, const RigidState& y) const {
    const bool finite = std::isfinite(y.position.x) && std::isfinite(y.position.y) &&
                        std::isfinite(y.pitch) && std::isfinite(y.velocity.x) &&
                        std::isfinite(y.velocity.y) && std::isfinite(y.pitch_rate);
    if (!finite) throw InstabilityError(t, fmt::format("state became non-finite at t = {} s", t));
    if (!opt_.contacts) return;
    const double dev = norm(y.position - com_reference(plan_, t).position);
    if (dev > opt_.divergence_bound) {
      throw InstabilityError(t, fmt::format("COM deviated {} m from the reference at t = {} s",
                                            dev, t));
    }
  }

 private:
  const BodyParams& body_;
  const GaitPlan& plan_;
  const SimulationOptions& opt_;
};

}  // namespace

DynamicsTrace forward_simulate(const BodyParams& body, const GaitPlan& plan,
                               const SimulationOptions& options) {
  body.validate();
  if (options.contacts && !(body.inertia_sagittal > 0.0)) {
    throw ConfigError("forward simulation with contacts needs a positive sagittal inertia");
  }
  const std::size_t n = step_count(options.t_end, options.dt);
  const double dt = options.dt;
  const Simulator sim(body, plan, options);

  RigidState y;
  if (options.initial) {
    y = *options.initial;
  } else {
    const ComReference ref = com_reference(plan, 0.0);
    y.position = ref.position;
    y.velocity = ref.velocity;
  }

  DynamicsTrace trace;
  trace.states.dt = dt;
  auto record = [&](double t) {
    DynamicsSample s;
    const StanceFeet feet = options.contacts ? stance_feet_at(plan, t) : StanceFeet{};
    sim.evaluate(t, y, feet, s);
    trace.states.time.push_back(t);
    trace.states.states.push_back(s.state);
    trace.torques.time.push_back(t);
    trace.torques.torque.push_back(s.torque);
    trace.torques.rate.push_back(s.rate);
    trace.contact_forces.push_back(s.contact_force);
    trace.margin.push_back(s.margin);
  };

  sim.check(0.0, y);
  record(0.0);
  DynamicsSample scratch;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double mid = t + 0.5 * dt;
    // One support set per step, taken from the step interior.
    const StanceFeet feet = options.contacts ? stance_feet_at(plan, mid) : StanceFeet{};
    const Derivative k1 = sim.evaluate(t, y, feet, scratch);
    const Derivative k2 = sim.evaluate(mid, advance(y, k1, 0.5 * dt), feet, scratch);
    const Derivative k3 = sim.evaluate(mid, advance(y, k2, 0.5 * dt), feet, scratch);
    const Derivative k4 = sim.evaluate(t + dt, advance(y, k3, dt), feet, scratch);
    Derivative sum;
    sum.velocity = k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity;
    sum.pitch_rate = k1.pitch_rate + 2.0 * k2.pitch_rate + 2.0 * k3.pitch_rate + k4.pitch_rate;
    sum.acceleration = k1.acceleration + 2.0 * k2.acceleration + 2.0 * k3.acceleration + k4.acceleration;
    sum.pitch_acceleration = k1.pitch_acceleration + 2.0 * k2.pitch_acceleration +
                             2.0 * k3.pitch_acceleration + k4.pitch_acceleration;
    y = advance(y, sum, dt / 6.0);
    const double t_next = static_cast<double>(k + 1) * dt;
    sim.check(t_next, y);
    record(t_next);
  }
  return trace;
}

}  // namespace mvam
