#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvam/actuation.hpp"
#include "mvam/gait.hpp"
#include "mvam/morphology.hpp"

namespace mvam {

// Trapezoidal integral of total power. Needs a uniform grid with at least two
// samples.
double energy_integral(const PowerTrace& power);
double energy_integral(std::span<const double> samples, double dt);

// E / (m g d). Throws UndefinedTcotError when d <= 0.
double tcot(double energy, double mass, double distance);

struct EnergyReport {
  double energy = 0.0;             // J
  double mechanical_energy = 0.0;  // J
  double copper_energy = 0.0;      // J
  double duration = 0.0;           // s
  double distance = 0.0;           // m
  double mean_power = 0.0;         // W
  double tcot = 0.0;
};

EnergyReport energy_report(const PowerTrace& power, double mass, double distance);

struct EvaluationSettings {
  GaitParams gait;
  ActuatorSet actuators;
  double dt = kDefaultDt;
  double mu = kDefaultFriction;
  PayloadOptions payload;
  bool compute_payload = true;
};

struct EvaluationRecord {
  std::size_t id = 0;
  BodyParams body;
  std::optional<double> tcot;
  std::optional<double> mean_power;
  std::optional<double> payload_margin;
  std::optional<double> min_stability_margin;
  bool feasible = false;
  std::string failure;        // empty when feasible
  std::vector<int> grid_index;
};

// Never throws for model failures; they land in `feasible` and `failure`.
EvaluationRecord evaluate_body(std::size_t id, const BodyParams& body,
                               const EvaluationSettings& settings);
EvaluationRecord evaluate_morphology(const MorphologySample& sample,
                                     const EvaluationSettings& settings);

// TCOT alone (no payload search); nullopt when the gait is infeasible.
std::optional<double> evaluate_tcot(const BodyParams& body, const EvaluationSettings& settings);

// Worker count from a request: 0 means hardware concurrency.
unsigned resolve_jobs(unsigned requested) noexcept;

// Evaluates every sample; the result order follows `samples` whatever `jobs` is.
std::vector<EvaluationRecord> evaluate_batch(std::span<const MorphologySample> samples,
                                             const EvaluationSettings& settings,
                                             unsigned jobs = 1);

}  // namespace mvam
