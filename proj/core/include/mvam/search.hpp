#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mvam/energetics.hpp"
#include "mvam/morphology.hpp"

namespace mvam {

// One record per enumerated sample, in enumeration order.
std::vector<EvaluationRecord> grid_sweep(const DesignSpaceSpec& spec,
                                         const EvaluationSettings& settings, unsigned jobs = 1);

struct GAConfig {
  int population_size = 50;
  int generations = 100;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;   // per gene
  double mutation_sigma = 0.1;  // fraction of each gene's range
  int elitism_count = 2;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct GeneBounds {
  double lo = 0.0;
  double hi = 0.0;
};

using Chromosome = std::vector<double>;

// Lower is better; +infinity marks an infeasible individual.
using FitnessFunction = std::function<double(const Chromosome&)>;

struct GenerationStats {
  int generation = 0;       // 1-based; generation 1 is the initial population
  double best = 0.0;
  double mean = 0.0;        // over finite fitness values
};

struct GAResult {
  Chromosome best;
  double best_fitness = 0.0;
  std::vector<GenerationStats> history;
};

// Generational GA: tournament (k = 2), uniform crossover, clamped Gaussian
// mutation, elitism. The RNG is only touched on the calling thread, so the
// result does not depend on `jobs`. `on_decode` sees every evaluated chromosome.
GAResult run_ga(std::span<const GeneBounds> genes, const FitnessFunction& fitness,
                const GAConfig& config, unsigned jobs = 1,
                const std::function<void(const Chromosome&)>& on_decode = {});

// Chromosome layout: (x, y) per component in spec order.
std::vector<GeneBounds> chromosome_bounds(const DesignSpaceSpec& spec);
std::vector<Placement> decode_chromosome(const DesignSpaceSpec& spec, const Chromosome& genes);

struct EvolveResult {
  EvaluationRecord best;
  Chromosome genes;
  std::vector<GenerationStats> history;
};

// TCOT-minimizing search over continuous placements. The returned record is
// fully evaluated (payload margin included when the settings ask for it).
EvolveResult evolve(const DesignSpaceSpec& spec, const EvaluationSettings& settings,
                    const GAConfig& config, unsigned jobs = 1,
                    const std::function<void(const Chromosome&)>& on_decode = {});

// Nondominated feasible records under (min TCOT, max payload margin), ordered by
// TCOT then id. Throws EmptyFrontError when no record has both objectives.
std::vector<EvaluationRecord> pareto_front(std::span<const EvaluationRecord> records);

bool dominates(const EvaluationRecord& a, const EvaluationRecord& b) noexcept;

}  // namespace mvam
