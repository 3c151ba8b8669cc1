#include "mvam/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mvam/error.hpp"

namespace mvam {

void ActuatorSpec::validate(const std::string& name) const {
  const auto positive = [&](double v, const char* field) {
    if (!(v > 0.0)) throw ConfigError(fmt::format("actuator '{}': {} must be positive, got {}", name, field, v));
  };
  positive(kv, "kv");
  positive(resistance, "resistance");
  positive(gear_ratio, "gear ratio");
  positive(torque_limit, "torque limit");
  positive(speed_limit, "speed limit");
  positive(efficiency, "efficiency");
  if (efficiency > 1.0) {
    throw ConfigError(fmt::format("actuator '{}': efficiency {} exceeds 1", name, efficiency));
  }
}

void ActuatorSet::validate() const {
  hip_sagittal.validate("hip_sagittal");
  knee.validate("knee");
  hip_frontal.validate("hip_frontal");
}

double motor_torque_constant(double kv) {
  if (!(kv > 0.0)) throw ConfigError(fmt::format("KV must be positive, got {}", kv));
  return 60.0 / (2.0 * std::numbers::pi * kv);
}

PowerSplit power_split(const ActuatorSpec& spec, double torque, double rate) {
  const double motor_torque = torque / (spec.gear_ratio * spec.efficiency);
  const double current = motor_torque / motor_torque_constant(spec.kv);
  return {std::max(torque * rate, 0.0), current * current * spec.resistance};
}

double electrical_power(const ActuatorSpec& spec, double torque, double rate) {
  return power_split(spec, torque, rate).total();
}

PowerTrace power_trace(const TorqueTrace& torques, const ActuatorSet& actuators) {
  const std::size_t n = torques.time.size();
  PowerTrace out;
  out.time = torques.time;
  out.joint.resize(n);
  out.total.resize(n);
  out.mechanical.resize(n);
  out.copper.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double mech = 0.0;
    double copper = 0.0;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const PowerSplit p = power_split(actuators.for_joint(j), torques.torque[k][j], torques.rate[k][j]);
      out.joint[k][j] = p.total();
      mech += p.mechanical;
      copper += p.copper;
    }
    out.mechanical[k] = mech;
    out.copper[k] = copper;
    out.total[k] = mech + copper;
  }
  return out;
}

FeasibilityReport check_torque_feasibility(const TorqueTrace& torques,
                                           const ActuatorSet& actuators) {
  FeasibilityReport report;
  for (std::size_t k = 0; k < torques.time.size(); ++k) {
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const ActuatorSpec& spec = actuators.for_joint(j);
      const double tau = torques.torque[k][j];
      const double omega = torques.rate[k][j];
      const bool over_torque = std::abs(tau) > spec.torque_limit;
      const bool over_speed = std::abs(omega) > spec.speed_limit;
      if (over_torque || over_speed) {
        report.violations.push_back({torques.time[k], j, tau, omega, over_torque, over_speed});
      }
    }
  }
  return report;
}

bool payload_feasible(const BodyParams& body, const GaitParams& gait, const ActuatorSet& actuators,
                      const PayloadOptions& options, double added) {
  const BodyParams loaded = add_point_mass(body, added, options.attach);
  try {
    const GaitPlan plan = plan_gait(gait, loaded);
    const DynamicsTrace trace = inverse_dynamics_trace(loaded, plan, options.dt, options.mu);
    return check_torque_feasibility(trace.torques, actuators).feasible();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error&) {
    return false;
  }
}

double payload_margin(const BodyParams& body, const GaitParams& gait, const ActuatorSet& actuators,
                      const PayloadOptions& options) {
  if (!(options.cap >= 0.0)) throw ConfigError("payload cap must be nonnegative");
  if (!payload_feasible(body, gait, actuators, options, 0.0)) {
    throw MarginUndefinedError("payload margin undefined: the unloaded design violates actuator limits");
  }
  // Integer grams keep the bisection exact and comparable to a 1 g scan.
  long lo = 0;
  long hi = std::lround(std::floor(options.cap * 1000.0 + 1e-9));
  if (hi == 0 || payload_feasible(body, gait, actuators, options, options.cap)) return options.cap;
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (payload_feasible(body, gait, actuators, options, static_cast<double>(mid) / 1000.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(lo) / 1000.0;
}

}  // namespace mvam
