#include "mvam/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "mvam/dynamics.hpp"
#include "mvam/error.hpp"
#include "parallel.hpp"

namespace mvam {

double energy_integral(std::span<const double> samples, double dt) {
  if (samples.size() < 2) throw ConfigError("energy integral needs at least two samples");
  if (!(dt > 0.0)) throw ConfigError("energy integral needs a positive time step");
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) sum += samples[k];
  return sum * dt;
}

double energy_integral(const PowerTrace& power) {
  const auto& t = power.time;
  if (t.size() < 2) throw ConfigError("energy integral needs at least two samples");
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-9 * std::max(1.0, dt)) {
      throw ConfigError(fmt::format("power trace grid is not uniform near t = {} s", t[k]));
    }
  }
  return energy_integral(power.total, dt);
}

double tcot(double energy, double mass, double distance) {
  if (!(distance > 0.0)) {
    throw UndefinedTcotError(fmt::format("TCOT undefined for travelled distance {} m", distance));
  }
  if (!(mass > 0.0)) throw ConfigError(fmt::format("TCOT needs a positive mass, got {}", mass));
  return energy / (mass * kGravity * distance);
}

EnergyReport energy_report(const PowerTrace& power, double mass, double distance) {
  EnergyReport r;
  r.energy = energy_integral(power);
  const double dt = (power.time.back() - power.time.front()) / static_cast<double>(power.time.size() - 1);
  r.mechanical_energy = energy_integral(power.mechanical, dt);
  r.copper_energy = energy_integral(power.copper, dt);
  r.duration = power.time.back() - power.time.front();
  r.distance = distance;
  r.mean_power = r.energy / r.duration;
  r.tcot = tcot(r.energy, mass, distance);
  return r;
}

namespace {

std::string first_violation(const FeasibilityReport& report) {
  const LimitViolation& v = report.violations.front();
  return fmt::format("actuator limit exceeded at joint {} (t = {} s, torque {} N m, rate {} rad/s); {} violations",
                     joint_name(v.joint), v.time, v.torque, v.rate, report.violations.size());
}

}  // namespace

EvaluationRecord evaluate_body(std::size_t id, const BodyParams& body,
                               const EvaluationSettings& settings) {
  EvaluationRecord rec;
  rec.id = id;
  rec.body = body;
  try {
    const GaitPlan plan = plan_gait(settings.gait, body);
    const DynamicsTrace trace = inverse_dynamics_trace(body, plan, settings.dt, settings.mu);
    rec.min_stability_margin = *std::min_element(trace.margin.begin(), trace.margin.end());
    const FeasibilityReport limits = check_torque_feasibility(trace.torques, settings.actuators);
    if (!limits.feasible()) {
      rec.failure = first_violation(limits);
      return rec;
    }
    const EnergyReport energy =
        energy_report(power_trace(trace.torques, settings.actuators), body.mass, plan.speed * plan.period);
    rec.tcot = energy.tcot;
    rec.mean_power = energy.mean_power;
    if (settings.compute_payload) {
      PayloadOptions payload = settings.payload;
      payload.dt = settings.dt;
      payload.mu = settings.mu;
      rec.payload_margin = payload_margin(body, settings.gait, settings.actuators, payload);
    }
    rec.feasible = true;
  } catch (const Error& e) {
    rec.tcot.reset();
    rec.mean_power.reset();
    rec.payload_margin.reset();
    rec.feasible = false;
    rec.failure = e.what();
  }
  return rec;
}

EvaluationRecord evaluate_morphology(const MorphologySample& sample,
                                     const EvaluationSettings& settings) {
  EvaluationRecord rec = evaluate_body(sample.id, sample.body, settings);
  rec.grid_index = sample.grid_index;
  return rec;
}

std::optional<double> evaluate_tcot(const BodyParams& body, const EvaluationSettings& settings) {
  EvaluationSettings s = settings;
  s.compute_payload = false;
  return evaluate_body(0, body, s).tcot;
}

unsigned resolve_jobs(unsigned requested) noexcept {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<EvaluationRecord> evaluate_batch(std::span<const MorphologySample> samples,
                                             const EvaluationSettings& settings, unsigned jobs) {
  std::vector<EvaluationRecord> out(samples.size());
  detail::parallel_for(samples.size(), resolve_jobs(jobs),
                       [&](std::size_t i) { out[i] = evaluate_morphology(samples[i], settings); });
  return out;
}

}  // namespace mvam
