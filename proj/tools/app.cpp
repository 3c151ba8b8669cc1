#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "mvam/config.hpp"
#include "mvam/csv.hpp"
#include "mvam/error.hpp"

#ifndef MVAM_VERSION
#define MVAM_VERSION "dev"
#endif

namespace mvam::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string out;
  std::string records;
  std::optional<std::uint64_t> seed;
  std::optional<double> speed;
  std::optional<double> period;
  std::optional<double> dt;
  std::optional<double> slice_cy;
  std::optional<int> generations;
  std::optional<int> population;
  unsigned jobs = 1;
  std::vector<std::string> argv;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

RunConfig resolve(const Options& o) {
  RunConfig c = load_config(o.config);
  if (o.speed) c.evaluation.gait.speed = *o.speed;
  if (o.period) c.evaluation.gait.period = *o.period;
  if (o.dt) {
    c.evaluation.dt = *o.dt;
    c.evaluation.payload.dt = *o.dt;
  }
  if (o.seed) c.ga.rng_seed = *o.seed;
  if (o.generations) c.ga.generations = *o.generations;
  if (o.population) {
    c.ga.population_size = *o.population;
    // Keep at least one non-elite slot when the population is shrunk.
    c.ga.elitism_count = std::clamp(c.ga.elitism_count, 1, std::max(1, *o.population - 1));
  }
  c.ga.validate();
  return c;
}

fs::path output_dir(const Options& o) {
  const fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create output directory '{}': {}", o.out, ec.message()));
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return f;
}

void write_manifest(const fs::path& dir, const Options& o, const RunConfig* config,
                    const std::vector<fs::path>& outputs, double seconds, const json& summary) {
  json m;
  m["tool"] = "mvam";
  m["version"] = MVAM_VERSION;
  m["command"] = o.command;
  m["argv"] = o.argv;
  m["config_path"] = o.config;
  if (config) {
    m["seed"] = config->ga.rng_seed;
    m["resolved_config"] = json::parse(to_json(*config));
  }
  json outs = json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  m["outputs"] = outs;
  m["wall_clock_s"] = seconds;
  m["summary"] = summary;
  auto f = open_output(dir / "manifest.json");
  f << m.dump(2) << '\n';
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int cmd_sweep(const Options& o, std::ostream& out) {
  const Timer timer;
  const RunConfig c = resolve(o);
  const auto records = grid_sweep(c.space, c.evaluation, o.jobs);
  const fs::path dir = output_dir(o);
  const fs::path csv = dir / "records.csv";
  {
    auto f = open_output(csv);
    write_records_csv(f, records);
  }
  const auto feasible = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.feasible; });
  json summary = {{"records", records.size()}, {"feasible", feasible}};
  const EvaluationRecord* best = nullptr;
  for (const auto& r : records) {
    if (r.tcot && (!best || *r.tcot < *best->tcot)) best = &r;
  }
  out << fmt::format("evaluated {} morphologies, {} feasible\n", records.size(), feasible);
  if (best) {
    summary["best_id"] = best->id;
    summary["best_tcot"] = *best->tcot;
    summary["best_cx_m"] = best->body.com_offset.x;
    out << fmt::format("minimum TCOT {} at id {} (Cx {} m, Cy {} m, Ib {} kg m^2, {})\n", *best->tcot,
                       best->id, best->body.com_offset.x, best->body.com_offset.y,
                       best->body.inertia_sagittal, to_string(classify_morphology(best->body)));
  }
  write_manifest(dir, o, &c, {csv}, timer.seconds(), summary);
  return kOk;
}

int cmd_evolve(const Options& o, std::ostream& out) {
  const Timer timer;
  if (!o.seed && std::getenv("CI") != nullptr) {
    throw ConfigError("--seed is required when CI is set");
  }
  const RunConfig c = resolve(o);
  const EvolveResult result = evolve(c.space, c.evaluation, c.ga, o.jobs);
  const fs::path dir = output_dir(o);
  const fs::path best_csv = dir / "best.csv";
  const fs::path history_csv = dir / "history.csv";
  {
    auto f = open_output(best_csv);
    write_records_csv(f, std::span(&result.best, 1));
  }
  {
    auto f = open_output(history_csv);
    write_history_csv(f, result.history);
  }
  const EvaluationRecord& b = result.best;
  json genes = result.genes;
  json summary = {{"best_tcot", optional_json(b.tcot)},
                  {"best_payload_margin_kg", optional_json(b.payload_margin)},
                  {"best_cx_m", b.body.com_offset.x},
                  {"genes", genes},
                  {"generations", result.history.size()}};
  out << fmt::format("best TCOT {} after {} generations (Cx {} m, Cy {} m, Ib {} kg m^2)\n",
                     b.tcot ? fmt::format("{}", *b.tcot) : std::string("n/a"), result.history.size(),
                     b.body.com_offset.x, b.body.com_offset.y, b.body.inertia_sagittal);
  write_manifest(dir, o, &c, {best_csv, history_csv}, timer.seconds(), summary);
  return kOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Timer timer;
  const RunConfig c = resolve(o);
  const auto samples = enumerate_design_space(c.space);
  if (c.simulation.sample >= samples.size()) {
    throw ConfigError(fmt::format("simulation.sample {} is out of range (space has {} samples)",
                                  c.simulation.sample, samples.size()));
  }
  const BodyParams& body = samples[c.simulation.sample].body;
  const GaitPlan plan = plan_gait(c.evaluation.gait, body);
  SimulationOptions sim;
  sim.gains = c.simulation.gains;
  sim.t_end = c.simulation.t_end.value_or(plan.period);
  sim.dt = c.evaluation.dt;
  sim.mu = c.evaluation.mu;
  sim.feedforward = c.simulation.feedforward;
  sim.divergence_bound = c.simulation.divergence_bound;

  const fs::path dir = output_dir(o);
  const fs::path trace_csv = dir / "trace.csv";
  DynamicsTrace trace;
  try {
    trace = forward_simulate(body, plan, sim);
  } catch (const InstabilityError& e) {
    err << fmt::format("simulation unstable at t = {} s: {}\n", e.time_s(), e.what());
    write_manifest(dir, o, &c, {}, timer.seconds(), {{"failure_time_s", e.time_s()}});
    return kInfeasible;
  }
  {
    auto f = open_output(trace_csv);
    write_trace_csv(f, trace);
  }
  const FeasibilityReport limits = check_torque_feasibility(trace.torques, c.evaluation.actuators);
  if (!limits.feasible()) {
    err << fmt::format("warning: {} actuator limit violations in the simulated trace\n",
                       limits.violations.size());
  }
  const double min_margin = *std::min_element(trace.margin.begin(), trace.margin.end());
  json summary = {{"mass_kg", body.mass},
                  {"min_stability_margin_m", min_margin},
                  {"limit_violations", limits.violations.size()}};
  EnergyReport energy;
  try {
    energy = energy_report(power_trace(trace.torques, c.evaluation.actuators), body.mass,
                           plan.speed * sim.t_end);
  } catch (const UndefinedTcotError& e) {
    write_manifest(dir, o, &c, {trace_csv}, timer.seconds(), summary);
    throw;
  }
  summary["tcot"] = energy.tcot;
  summary["mean_power_W"] = energy.mean_power;
  summary["energy_J"] = energy.energy;
  summary["mechanical_energy_J"] = energy.mechanical_energy;
  summary["copper_energy_J"] = energy.copper_energy;
  summary["distance_m"] = energy.distance;
  out << fmt::format("tcot {}\nmean_power_W {}\nmin_stability_margin_m {}\n", energy.tcot, energy.mean_power,
                     min_margin);
  write_manifest(dir, o, &c, {trace_csv}, timer.seconds(), summary);
  return kOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  const Timer timer;
  if (!o.slice_cy) throw ConfigError("report needs --slice-cy-m");
  std::ifstream in(o.records);
  if (!in) throw ConfigError(fmt::format("cannot read records '{}'", o.records));
  const auto rows = read_records_csv(in, o.records);
  const Slice slice = slice_at_cy(rows, *o.slice_cy);
  const fs::path dir = output_dir(o);
  const fs::path csv = dir / "slice.csv";
  {
    auto f = open_output(csv);
    write_slice_csv(f, slice);
  }
  json summary = {{"requested_cy_m", slice.requested_cy}, {"rows", slice.rows.size()}};
  if (slice.snapped_cy) {
    summary["snapped_cy_m"] = *slice.snapped_cy;
    if (*slice.snapped_cy != slice.requested_cy) {
      err << fmt::format("note: cy {} m is off-grid; using nearest value {} m\n", slice.requested_cy,
                         *slice.snapped_cy);
    }
  }
  if (slice.rows.empty()) err << "warning: slice is empty\n";
  out << fmt::format("{} rows written to {}\n", slice.rows.size(), csv.string());
  write_manifest(dir, o, nullptr, {csv}, timer.seconds(), summary);
  return kOk;
}

int dispatch(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.command == "sweep") return cmd_sweep(o, out);
  if (o.command == "evolve") return cmd_evolve(o, out);
  if (o.command == "simulate") return cmd_simulate(o, out, err);
  return cmd_report(o, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  o.argv = args;
  CLI::App app{"Cost of transport and payload margin of quadruped morphologies", "mvam"};
  app.set_version_flag("--version", MVAM_VERSION);
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) {
      sub->add_option("--config", o.config, "JSON config or run manifest")->required()->check(CLI::ExistingFile);
    }
    sub->add_option("--out", o.out, "output directory")->required();
    sub->add_option("--jobs", o.jobs, "worker threads (0 = all cores)")->envname("MVAM_JOBS");
  };
  auto gait_flags = [&](CLI::App* sub) {
    sub->add_option("--speed-mps", o.speed, "forward speed override");
    sub->add_option("--period-s", o.period, "gait period override");
    sub->add_option("--dt-s", o.dt, "time step override");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "evaluate every morphology of the design space");
  common(sweep, true);
  gait_flags(sweep);
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "genetic search for the minimum-TCOT placement");
  common(evolve_cmd, true);
  gait_flags(evolve_cmd);
  evolve_cmd->add_option("--seed", o.seed, "RNG seed (required when CI is set)");
  evolve_cmd->add_option("--generations", o.generations, "GA generations");
  evolve_cmd->add_option("--population", o.population, "GA population size");
  CLI::App* simulate = app.add_subcommand("simulate", "forward-simulate one design and report its TCOT");
  common(simulate, true);
  gait_flags(simulate);
  CLI::App* report = app.add_subcommand("report", "fixed-Cy slice of a records file");
  common(report, false);
  report->add_option("--records", o.records, "records.csv from sweep")->required();
  report->add_option("--slice-cy-m", o.slice_cy, "Cy of the slice")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SearchFailedError& e) {
    err << "search failed: " << e.what() << '\n';
    return kSearchFailed;
  } catch (const EmptyFrontError& e) {
    err << "search failed: " << e.what() << '\n';
    return kSearchFailed;
  } catch (const Error& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace mvam::cli
