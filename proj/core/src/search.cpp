#include "mvam/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "mvam/error.hpp"
#include "parallel.hpp"

namespace mvam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kReseedAttempts = 10;

struct Individual {
  Chromosome genes;
  double fitness = kInf;
};

class Population {
 public:
  Population(std::span<const GeneBounds> genes, const GAConfig& cfg)
      : genes_(genes), cfg_(cfg), rng_(cfg.rng_seed) {}

  Chromosome random_chromosome() {
    Chromosome c(genes_.size());
    for (std::size_t g = 0; g < genes_.size(); ++g) {
      std::uniform_real_distribution<double> u(genes_[g].lo, genes_[g].hi);
      c[g] = genes_[g].lo == genes_[g].hi ? genes_[g].lo : u(rng_);
    }
    return c;
  }

  std::size_t tournament(const std::vector<Individual>& pop) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const std::size_t a = pick(rng_);
    const std::size_t b = pick(rng_);
    // Ties go to the lower index so selection is reproducible.
    if (pop[a].fitness < pop[b].fitness) return a;
    if (pop[b].fitness < pop[a].fitness) return b;
    return std::min(a, b);
  }

  Chromosome offspring(const std::vector<Individual>& pop) {
    const Chromosome& pa = pop[tournament(pop)].genes;
    const Chromosome& pb = pop[tournament(pop)].genes;
    Chromosome child = pa;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng_) < cfg_.crossover_rate) {
      for (std::size_t g = 0; g < child.size(); ++g) {
        if (unit(rng_) < 0.5) child[g] = pb[g];
      }
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t g = 0; g < child.size(); ++g) {
      if (unit(rng_) < cfg_.mutation_rate) {
        const double range = genes_[g].hi - genes_[g].lo;
        child[g] = std::clamp(child[g] + normal(rng_) * cfg_.mutation_sigma * range, genes_[g].lo,
                              genes_[g].hi);
      }
    }
    return child;
  }

 private:
  std::span<const GeneBounds> genes_;
  const GAConfig& cfg_;
  std::mt19937_64 rng_;
};

GenerationStats stats_of(int generation, const std::vector<Individual>& pop) {
  GenerationStats s;
  s.generation = generation;
  s.best = kInf;
  double sum = 0.0;
  std::size_t finite = 0;
  for (const auto& ind : pop) {
    s.best = std::min(s.best, ind.fitness);
    if (std::isfinite(ind.fitness)) {
      sum += ind.fitness;
      ++finite;
    }
  }
  s.mean = finite > 0 ? sum / static_cast<double>(finite) : kInf;
  return s;
}

}  // namespace

void GAConfig::validate() const {
  if (population_size < 2) throw ConfigError("GA population size must be at least 2");
  if (generations < 1) throw ConfigError("GA needs at least one generation");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ConfigError("GA crossover rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("GA mutation rate must lie in [0, 1]");
  if (!(mutation_sigma >= 0.0)) throw ConfigError("GA mutation sigma must be nonnegative");
  if (elitism_count < 1 || elitism_count >= population_size) {
    throw ConfigError(fmt::format("GA elitism count must lie in [1, {}), got {}", population_size,
                                  elitism_count));
  }
}

std::vector<EvaluationRecord> grid_sweep(const DesignSpaceSpec& spec,
                                         const EvaluationSettings& settings, unsigned jobs) {
  const std::vector<MorphologySample> samples = enumerate_design_space(spec);
  return evaluate_batch(samples, settings, jobs);
}

GAResult run_ga(std::span<const GeneBounds> genes, const FitnessFunction& fitness,
                const GAConfig& config, unsigned jobs,
                const std::function<void(const Chromosome&)>& on_decode) {
  config.validate();
  for (const auto& g : genes) {
    if (!(g.lo <= g.hi)) throw ConfigError("gene bounds have lo > hi");
  }
  const unsigned workers = resolve_jobs(jobs);
  Population rng(genes, config);
  const auto n = static_cast<std::size_t>(config.population_size);

  auto evaluate = [&](std::vector<Individual>& pop, std::size_t from) {
    if (on_decode) {
      for (std::size_t i = from; i < pop.size(); ++i) on_decode(pop[i].genes);
    }
    detail::parallel_for(pop.size() - from, workers, [&](std::size_t k) {
      Individual& ind = pop[from + k];
      const double f = fitness(ind.genes);
      ind.fitness = std::isnan(f) ? kInf : f;
    });
  };

  std::vector<Individual> pop(n);
  bool any_feasible = false;
  for (int attempt = 0; attempt < kReseedAttempts && !any_feasible; ++attempt) {
    for (auto& ind : pop) ind.genes = rng.random_chromosome();
    evaluate(pop, 0);
    any_feasible = std::any_of(pop.begin(), pop.end(),
                               [](const Individual& i) { return std::isfinite(i.fitness); });
  }
  if (!any_feasible) {
    throw SearchFailedError(fmt::format(
        "every individual was infeasible in {} initial populations", kReseedAttempts));
  }

  GAResult result;
  result.history.push_back(stats_of(1, pop));
  const auto elites = static_cast<std::size_t>(config.elitism_count);
  for (int gen = 2; gen <= config.generations; ++gen) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].fitness < pop[b].fitness;
    });
    std::vector<Individual> next;
    next.reserve(n);
    for (std::size_t e = 0; e < elites; ++e) next.push_back(pop[order[e]]);
    while (next.size() < n) next.push_back({rng.offspring(pop), kInf});
    evaluate(next, elites);
    pop = std::move(next);
    result.history.push_back(stats_of(gen, pop));
  }

  const auto best = std::min_element(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    return a.fitness < b.fitness;
  });
  result.best = best->genes;
  result.best_fitness = best->fitness;
  return result;
}

std::vector<GeneBounds> chromosome_bounds(const DesignSpaceSpec& spec) {
  std::vector<GeneBounds> out;
  out.reserve(2 * spec.components.size());
  for (const auto& c : spec.components) {
    out.push_back({c.bounds.xmin, c.bounds.xmax});
    out.push_back({c.bounds.ymin, c.bounds.ymax});
  }
  return out;
}

std::vector<Placement> decode_chromosome(const DesignSpaceSpec& spec, const Chromosome& genes) {
  if (genes.size() != 2 * spec.components.size()) {
    throw ConfigError(fmt::format("chromosome has {} genes, expected {}", genes.size(),
                                  2 * spec.components.size()));
  }
  std::vector<Placement> out;
  out.reserve(spec.components.size());
  for (std::size_t c = 0; c < spec.components.size(); ++c) {
    out.push_back({spec.components[c].name, {genes[2 * c], genes[2 * c + 1]}});
  }
  return out;
}

EvolveResult evolve(const DesignSpaceSpec& spec, const EvaluationSettings& settings,
                    const GAConfig& config, unsigned jobs,
                    const std::function<void(const Chromosome&)>& on_decode) {
  spec.validate();
  const std::vector<GeneBounds> bounds = chromosome_bounds(spec);
  const FitnessFunction fitness = [&](const Chromosome& genes) {
    const std::vector<Placement> placements = decode_chromosome(spec, genes);
    const std::optional<double> t = evaluate_tcot(aggregate_body_params(spec, placements), settings);
    return t ? *t : kInf;
  };
  GAResult ga = run_ga(bounds, fitness, config, jobs, on_decode);

  EvolveResult out;
  out.genes = ga.best;
  out.history = std::move(ga.history);
  out.best = evaluate_body(0, aggregate_body_params(spec, decode_chromosome(spec, out.genes)), settings);
  return out;
}

bool dominates(const EvaluationRecord& a, const EvaluationRecord& b) noexcept {
  if (!a.tcot || !a.payload_margin || !b.tcot || !b.payload_margin) return false;
  const bool no_worse = *a.tcot <= *b.tcot && *a.payload_margin >= *b.payload_margin;
  const bool better = *a.tcot < *b.tcot || *a.payload_margin > *b.payload_margin;
  return no_worse && better;
}

std::vector<EvaluationRecord> pareto_front(std::span<const EvaluationRecord> records) {
  std::vector<const EvaluationRecord*> candidates;
  for (const auto& r : records) {
    if (r.feasible && r.tcot && r.payload_margin) candidates.push_back(&r);
  }
  if (candidates.empty()) throw EmptyFrontError("no feasible record carries both TCOT and payload margin");
  std::sort(candidates.begin(), candidates.end(), [](const EvaluationRecord* a, const EvaluationRecord* b) {
    if (*a->tcot != *b->tcot) return *a->tcot < *b->tcot;
    if (*a->payload_margin != *b->payload_margin) return *a->payload_margin > *b->payload_margin;
    return a->id < b->id;
  });

  // Sweep groups of equal TCOT; a group survives only if its best margin beats
  // every margin seen at strictly lower TCOT.
  std::vector<EvaluationRecord> front;
  double best_margin = -kInf;
  std::size_t i = 0;
  while (i < candidates.size()) {
    std::size_t j = i;
    while (j < candidates.size() && *candidates[j]->tcot == *candidates[i]->tcot) ++j;
    const double group_best = *candidates[i]->payload_margin;
    if (group_best > best_margin) {
      for (std::size_t k = i; k < j && *candidates[k]->payload_margin == group_best; ++k) {
        front.push_back(*candidates[k]);
      }
      best_margin = group_best;
    }
    i = j;
  }
  return front;
}

}  // namespace mvam
