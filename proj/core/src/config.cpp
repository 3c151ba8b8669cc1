#include "mvam/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mvam/error.hpp"

namespace mvam {

namespace {

using nlohmann::json;

// A JSON object plus the dotted path that led to it, for error messages.
class Node {
 public:
  Node(const json& value, std::string path, const std::string& source)
      : value_(value), path_(std::move(path)), source_(source) {
    if (!value_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what, const std::string& key = {}) const {
    const std::string field = key.empty() ? path_ : join(key);
    throw ConfigError(fmt::format("{}: field '{}': {}", source_, field.empty() ? "<root>" : field, what));
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& [key, _] : value_.items()) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) fail("unknown key", key);
    }
  }

  bool has(const char* key) const { return value_.contains(key); }

  Node object(const char* key) const { return Node(at(key), join(key), source_); }

  const json& at(const char* key) const {
    if (!value_.contains(key)) fail("missing required key", key);
    return value_.at(key);
  }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) fail("expected a number", key);
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const char* key, long long fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) fail("expected an integer", key);
    return v.get<long long>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) fail("expected true or false", key);
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) fail("expected a string", key);
    return v.get<std::string>();
  }

  Vec2 pair(const char* key, Vec2 fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail("expected [x, y]", key);
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  const std::string& path() const { return path_; }
  const json& value() const { return value_; }
  const std::string& source() const { return source_; }
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& value_;
  std::string path_;
  const std::string& source_;
};

// Runs a validate() call and re-labels its ConfigError with the field path.
template <class F>
void checked(const Node& node, F&& validate) {
  try {
    validate();
  } catch (const ConfigError& e) {
    node.fail(e.what());
  }
}

ComponentSpec parse_component(const Node& n) {
  n.allow_only({"name", "mass_kg", "bounds", "grid", "own_inertia_kgm2", "mirror_x"});
  ComponentSpec c;
  c.name = n.string("name");
  c.mass = n.number("mass_kg");
  const Node b = n.object("bounds");
  b.allow_only({"xmin", "xmax", "ymin", "ymax"});
  c.bounds = {b.number("xmin"), b.number("xmax"), b.number("ymin"), b.number("ymax")};
  if (n.has("grid")) {
    const Node g = n.object("grid");
    g.allow_only({"nx", "ny"});
    c.grid = {static_cast<int>(g.integer("nx", 1)), static_cast<int>(g.integer("ny", 1))};
  }
  c.own_inertia = n.number("own_inertia_kgm2", 0.0);
  c.mirror_x = n.boolean("mirror_x", false);
  return c;
}

Geometry parse_geometry(const Node& n) {
  n.allow_only({"torso_length_m", "torso_height_m", "hip_spacing_m", "leg_link_length_m",
                "knee_direction"});
  Geometry g;
  g.torso_length = n.number("torso_length_m", g.torso_length);
  g.torso_height = n.number("torso_height_m", g.torso_height);
  g.hip_spacing = n.number("hip_spacing_m", g.hip_spacing);
  g.leg_link_length = n.number("leg_link_length_m", g.leg_link_length);
  if (n.has("knee_direction")) {
    const std::string k = n.string("knee_direction");
    try {
      g.knee = knee_direction_from_string(k);
    } catch (const Error& e) {
      n.fail(e.what(), "knee_direction");
    }
  }
  return g;
}

GaitParams parse_gait(const Node& n) {
  n.allow_only({"speed_mps", "period_s", "duty_factor", "swing_apex_m", "stance_height_m"});
  GaitParams g;
  g.speed = n.number("speed_mps", g.speed);
  g.period = n.number("period_s", g.period);
  g.duty_factor = n.number("duty_factor", g.duty_factor);
  g.swing_apex = n.number("swing_apex_m", g.swing_apex);
  g.stance_height = n.number("stance_height_m", g.stance_height);
  return g;
}

ActuatorSpec parse_actuator(const Node& n, ActuatorSpec a) {
  n.allow_only({"kv_rpm_per_v", "resistance_ohm", "gear_ratio", "torque_limit_nm",
                "speed_limit_rad_s", "efficiency"});
  a.kv = n.number("kv_rpm_per_v", a.kv);
  a.resistance = n.number("resistance_ohm", a.resistance);
  a.gear_ratio = n.number("gear_ratio", a.gear_ratio);
  a.torque_limit = n.number("torque_limit_nm", a.torque_limit);
  a.speed_limit = n.number("speed_limit_rad_s", a.speed_limit);
  a.efficiency = n.number("efficiency", a.efficiency);
  return a;
}

void parse_evaluation(const Node& n, EvaluationSettings& e) {
  n.allow_only({"dt_s", "friction", "compute_payload", "payload"});
  e.dt = n.number("dt_s", e.dt);
  e.mu = n.number("friction", e.mu);
  e.compute_payload = n.boolean("compute_payload", e.compute_payload);
  if (n.has("payload")) {
    const Node p = n.object("payload");
    p.allow_only({"attach_m", "cap_kg"});
    e.payload.attach = p.pair("attach_m", e.payload.attach);
    e.payload.cap = p.number("cap_kg", e.payload.cap);
  }
  e.payload.dt = e.dt;
  e.payload.mu = e.mu;
  if (!(e.dt > 0.0)) n.fail("must be positive", "dt_s");
  if (!(e.mu >= 0.0)) n.fail("must be nonnegative", "friction");
  if (!(e.payload.cap >= 0.0)) n.fail("must be nonnegative", "payload.cap_kg");
}

GAConfig parse_ga(const Node& n) {
  n.allow_only({"population_size", "generations", "crossover_rate", "mutation_rate",
                "mutation_sigma", "elitism_count", "rng_seed"});
  GAConfig g;
  g.population_size = static_cast<int>(n.integer("population_size", g.population_size));
  g.generations = static_cast<int>(n.integer("generations", g.generations));
  g.crossover_rate = n.number("crossover_rate", g.crossover_rate);
  g.mutation_rate = n.number("mutation_rate", g.mutation_rate);
  g.mutation_sigma = n.number("mutation_sigma", g.mutation_sigma);
  g.elitism_count = static_cast<int>(n.integer("elitism_count", g.elitism_count));
  if (n.has("rng_seed")) {
    const json& v = n.at("rng_seed");
    if (!v.is_number_unsigned()) n.fail("expected a nonnegative integer", "rng_seed");
    g.rng_seed = v.get<std::uint64_t>();
  }
  checked(n, [&] { g.validate(); });
  return g;
}

SimulationConfig parse_simulation(const Node& n) {
  n.allow_only({"kp", "kd", "t_end_s", "feedforward", "divergence_bound_m", "sample"});
  SimulationConfig s;
  s.gains.kp = n.number("kp", s.gains.kp);
  s.gains.kd = n.number("kd", s.gains.kd);
  if (n.has("t_end_s")) s.t_end = n.number("t_end_s");
  s.feedforward = n.boolean("feedforward", s.feedforward);
  s.divergence_bound = n.number("divergence_bound_m", s.divergence_bound);
  const long long sample = n.integer("sample", 0);
  if (sample < 0) n.fail("must be nonnegative", "sample");
  s.sample = static_cast<std::size_t>(sample);
  return s;
}

RunConfig parse_root(const Node& root) {
  root.allow_only({"components", "base", "geometry", "sample_cap", "gait", "actuators",
                   "evaluation", "ga", "simulation"});
  RunConfig c;
  const json& comps = root.at("components");
  if (!comps.is_array()) root.fail("expected a list", "components");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    c.space.components.push_back(
        parse_component(Node(comps[i], fmt::format("components[{}]", i), root.source())));
  }
  if (root.has("base")) {
    const Node b = root.object("base");
    b.allow_only({"mass_kg", "com_m", "inertia_kgm2"});
    c.space.base = {b.number("mass_kg", 0.0), b.pair("com_m", {}), b.number("inertia_kgm2", 0.0)};
  }
  if (root.has("geometry")) c.space.geometry = parse_geometry(root.object("geometry"));
  if (root.has("sample_cap")) {
    const long long cap = root.integer("sample_cap", 0);
    if (cap < 1) root.fail("must be at least 1", "sample_cap");
    c.space.sample_cap = static_cast<std::size_t>(cap);
  }
  checked(root, [&] { c.space.validate(); });

  if (root.has("gait")) c.evaluation.gait = parse_gait(root.object("gait"));
  if (root.has("actuators")) {
    const Node a = root.object("actuators");
    a.allow_only({"hip_sagittal", "knee", "hip_frontal"});
    auto& set = c.evaluation.actuators;
    if (a.has("hip_sagittal")) set.hip_sagittal = parse_actuator(a.object("hip_sagittal"), set.hip_sagittal);
    if (a.has("knee")) set.knee = parse_actuator(a.object("knee"), set.knee);
    if (a.has("hip_frontal")) set.hip_frontal = parse_actuator(a.object("hip_frontal"), set.hip_frontal);
    checked(a, [&] { set.validate(); });
  }
  if (root.has("evaluation")) parse_evaluation(root.object("evaluation"), c.evaluation);
  if (root.has("ga")) c.ga = parse_ga(root.object("ga"));
  if (root.has("simulation")) c.simulation = parse_simulation(root.object("simulation"));
  return c;
}

json actuator_json(const ActuatorSpec& a) {
  return {{"kv_rpm_per_v", a.kv},           {"resistance_ohm", a.resistance},
          {"gear_ratio", a.gear_ratio},     {"torque_limit_nm", a.torque_limit},
          {"speed_limit_rad_s", a.speed_limit}, {"efficiency", a.efficiency}};
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Turn the byte offset into a line/column pair.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(fmt::format("{}:{}:{}: malformed JSON: {}", source, line, col, e.what()));
  }
  if (doc.is_object() && doc.contains("resolved_config")) {
    return parse_root(Node(doc.at("resolved_config"), "resolved_config", source));
  }
  return parse_root(Node(doc, "", source));
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string to_json(const RunConfig& c, int indent) {
  json comps = json::array();
  for (const auto& comp : c.space.components) {
    comps.push_back({{"name", comp.name},
                     {"mass_kg", comp.mass},
                     {"bounds",
                      {{"xmin", comp.bounds.xmin},
                       {"xmax", comp.bounds.xmax},
                       {"ymin", comp.bounds.ymin},
                       {"ymax", comp.bounds.ymax}}},
                     {"grid", {{"nx", comp.grid.nx}, {"ny", comp.grid.ny}}},
                     {"own_inertia_kgm2", comp.own_inertia},
                     {"mirror_x", comp.mirror_x}});
  }
  const Geometry& g = c.space.geometry;
  const EvaluationSettings& e = c.evaluation;
  json doc = {
      {"components", comps},
      {"base",
       {{"mass_kg", c.space.base.mass},
        {"com_m", {c.space.base.com.x, c.space.base.com.y}},
        {"inertia_kgm2", c.space.base.inertia}}},
      {"geometry",
       {{"torso_length_m", g.torso_length},
        {"torso_height_m", g.torso_height},
        {"hip_spacing_m", g.hip_spacing},
        {"leg_link_length_m", g.leg_link_length},
        {"knee_direction", to_string(g.knee)}}},
      {"sample_cap", c.space.sample_cap},
      {"gait",
       {{"speed_mps", e.gait.speed},
        {"period_s", e.gait.period},
        {"duty_factor", e.gait.duty_factor},
        {"swing_apex_m", e.gait.swing_apex},
        {"stance_height_m", e.gait.stance_height}}},
      {"actuators",
       {{"hip_sagittal", actuator_json(e.actuators.hip_sagittal)},
        {"knee", actuator_json(e.actuators.knee)},
        {"hip_frontal", actuator_json(e.actuators.hip_frontal)}}},
      {"evaluation",
       {{"dt_s", e.dt},
        {"friction", e.mu},
        {"compute_payload", e.compute_payload},
        {"payload",
         {{"attach_m", {e.payload.attach.x, e.payload.attach.y}}, {"cap_kg", e.payload.cap}}}}},
      {"ga",
       {{"population_size", c.ga.population_size},
        {"generations", c.ga.generations},
        {"crossover_rate", c.ga.crossover_rate},
        {"mutation_rate", c.ga.mutation_rate},
        {"mutation_sigma", c.ga.mutation_sigma},
        {"elitism_count", c.ga.elitism_count},
        {"rng_seed", c.ga.rng_seed}}},
  };
  json sim = {{"kp", c.simulation.gains.kp},
              {"kd", c.simulation.gains.kd},
              {"feedforward", c.simulation.feedforward},
              {"divergence_bound_m", c.simulation.divergence_bound},
              {"sample", c.simulation.sample}};
  if (c.simulation.t_end) sim["t_end_s"] = *c.simulation.t_end;
  doc["simulation"] = sim;
  return doc.dump(indent);
}

}  // namespace mvam
