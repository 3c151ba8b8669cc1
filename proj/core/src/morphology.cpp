#include "mvam/morphology.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "mvam/error.hpp"

namespace mvam {

const char* to_string(KneeDirection k) noexcept {
  switch (k) {
    case KneeDirection::Polar: return "polar";
    case KneeDirection::Forward: return "forward";
    case KneeDirection::Rearward: return "rearward";
  }
  return "?";
}

KneeDirection knee_direction_from_string(const std::string& s) {
  if (s == "polar") return KneeDirection::Polar;
  if (s == "forward") return KneeDirection::Forward;
  if (s == "rearward") return KneeDirection::Rearward;
  throw ConfigError(fmt::format("unknown knee direction '{}' (expected polar|forward|rearward)", s));
}

void BodyParams::validate() const {
  const auto& g = geometry;
  if (!(mass > 0.0)) throw ConfigError(fmt::format("body mass must be positive, got {}", mass));
  if (!(inertia_sagittal >= 0.0)) throw ConfigError("body inertia must be nonnegative");
  if (!(g.torso_length > 0.0 && g.torso_height > 0.0 && g.hip_spacing > 0.0 &&
        g.leg_link_length > 0.0)) {
    throw ConfigError("geometry lengths must be positive");
  }
  if (g.hip_spacing > g.torso_length) {
    throw ConfigError(fmt::format("hip spacing {} exceeds torso length {}", g.hip_spacing,
                                  g.torso_length));
  }
  if (!std::isfinite(com_offset.x) || !std::isfinite(com_offset.y)) {
    throw ConfigError("COM offset must be finite");
  }
}

void DesignSpaceSpec::validate() const {
  if (components.empty()) throw ConfigError("design space needs at least one component");
  std::unordered_set<std::string> names;
  double total = base.mass;
  if (base.mass < 0.0) throw ConfigError("base structure mass must be nonnegative");
  if (base.inertia < 0.0) throw ConfigError("base structure inertia must be nonnegative");
  for (const auto& c : components) {
    if (c.name.empty()) throw ConfigError("component name must not be empty");
    if (!names.insert(c.name).second) {
      throw ConfigError(fmt::format("duplicate component '{}'", c.name));
    }
    if (!(c.mass > 0.0)) {
      throw ConfigError(fmt::format("component '{}' mass must be positive", c.name));
    }
    if (c.bounds.xmin > c.bounds.xmax || c.bounds.ymin > c.bounds.ymax) {
      throw ConfigError(fmt::format("component '{}' bounds have min > max", c.name));
    }
    if (c.grid.nx <= 0 || c.grid.ny <= 0) {
      throw ConfigError(fmt::format("component '{}' grid resolution must be >= 1", c.name));
    }
    if (c.own_inertia < 0.0) {
      throw ConfigError(fmt::format("component '{}' inertia must be nonnegative", c.name));
    }
    total += c.mass;
  }
  if (!(total > 0.0)) throw DegenerateDesignError("total design mass is zero");
  BodyParams probe;
  probe.mass = total;
  probe.geometry = geometry;
  probe.validate();
}

const ComponentSpec& DesignSpaceSpec::component(const std::string& name) const {
  for (const auto& c : components) {
    if (c.name == name) return c;
  }
  throw ConfigError(fmt::format("unknown component '{}'", name));
}

MassProperties aggregate(std::span<const PointMass> masses) {
  MassProperties out;
  Vec2 moment;
  for (const auto& m : masses) {
    out.mass += m.mass;
    moment += m.mass * m.position;
  }
  if (!(out.mass > 0.0)) throw DegenerateDesignError("aggregate mass is not positive");
  out.com = moment * (1.0 / out.mass);
  out.inertia = inertia_about(masses, out.com);
  return out;
}

double inertia_about(std::span<const PointMass> masses, const Vec2& point) {
  double inertia = 0.0;
  for (const auto& m : masses) {
    const Vec2 d = m.position - point;
    inertia += m.own_inertia + m.mass * dot(d, d);
  }
  return inertia;
}

namespace {

void append_component(std::vector<PointMass>& out, const ComponentSpec& c, const Vec2& p) {
  if (c.mirror_x) {
    out.push_back({0.5 * c.mass, p, 0.5 * c.own_inertia});
    out.push_back({0.5 * c.mass, {-p.x, p.y}, 0.5 * c.own_inertia});
  } else {
    out.push_back({c.mass, p, c.own_inertia});
  }
}

}  // namespace

BodyParams aggregate_body_params(const DesignSpaceSpec& spec,
                                 std::span<const Placement> placements) {
  std::vector<PointMass> masses;
  masses.reserve(placements.size() * 2 + 1);
  if (spec.base.mass > 0.0) masses.push_back({spec.base.mass, spec.base.com, spec.base.inertia});
  std::unordered_set<std::string> seen;
  for (const auto& pl : placements) {
    const ComponentSpec& c = spec.component(pl.component);
    if (!seen.insert(pl.component).second) {
      throw ConfigError(fmt::format("component '{}' placed twice", pl.component));
    }
    if (!c.bounds.contains(pl.position)) {
      throw BoundsError(c.name, fmt::format("component '{}' placed at ({}, {}) outside its bounds "
                                            "[{}, {}] x [{}, {}]",
                                            c.name, pl.position.x, pl.position.y, c.bounds.xmin,
                                            c.bounds.xmax, c.bounds.ymin, c.bounds.ymax));
    }
    append_component(masses, c, pl.position);
  }
  if (masses.empty()) throw DegenerateDesignError("design has no mass: empty placements and zero base mass");

  const MassProperties mp = aggregate(masses);
  BodyParams body;
  body.mass = mp.mass;
  body.com_offset = mp.com;
  body.inertia_sagittal = mp.inertia;
  body.geometry = spec.geometry;
  return body;
}

BodyParams add_point_mass(const BodyParams& body, double mass, const Vec2& position) {
  if (mass == 0.0) return body;
  const PointMass parts[] = {{body.mass, body.com_offset, body.inertia_sagittal},
                             {mass, position, 0.0}};
  const MassProperties mp = aggregate(parts);
  BodyParams out = body;
  out.mass = mp.mass;
  out.com_offset = mp.com;
  out.inertia_sagittal = mp.inertia;
  return out;
}

MorphologyClass classify_morphology(const BodyParams& body, double deadband) {
  MorphologyClass c;
  const double cx = body.com_offset.x;
  const double cy = body.com_offset.y;
  if (std::abs(cx) >= deadband) c.x = cx > 0.0 ? FrontBack::Front : FrontBack::Back;
  if (std::abs(cy) >= deadband) c.y = cy > 0.0 ? TopBottom::Top : TopBottom::Bottom;
  return c;
}

std::string to_string(const MorphologyClass& c) {
  const char* x = c.x == FrontBack::Front ? "front-heavy"
                  : c.x == FrontBack::Back ? "back-heavy"
                                           : "neutral-x";
  const char* y = c.y == TopBottom::Top ? "top-heavy"
                  : c.y == TopBottom::Bottom ? "bottom-heavy"
                                             : "neutral-y";
  return fmt::format("{}, {}", x, y);
}

double grid_coordinate(double lo, double hi, int n, int i) noexcept {
  if (n <= 1) return 0.5 * (lo + hi);
  if (i == n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::size_t design_space_size(const DesignSpaceSpec& spec) {
  std::size_t count = 1;
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  for (const auto& c : spec.components) {
    const auto per = static_cast<std::size_t>(std::max(c.grid.nx, 0)) *
                     static_cast<std::size_t>(std::max(c.grid.ny, 0));
    if (per != 0 && count > kMax / per) return kMax;
    count *= per;
  }
  return count;
}

std::vector<MorphologySample> enumerate_design_space(const DesignSpaceSpec& spec) {
  spec.validate();
  const std::size_t total = design_space_size(spec);
  if (total > spec.sample_cap) {
    throw SpaceTooLargeError(fmt::format("design space has {} samples, above the cap of {}",
                                         total, spec.sample_cap));
  }

  const std::size_t nc = spec.components.size();
  std::vector<MorphologySample> samples;
  samples.reserve(total);
  std::vector<int> index(2 * nc, 0);
  std::vector<Placement> placements(nc);
  for (std::size_t id = 0; id < total; ++id) {
    // Mixed-radix decode, last component's y fastest.
    std::size_t rem = id;
    for (std::size_t k = nc; k-- > 0;) {
      const auto& c = spec.components[k];
      const auto ny = static_cast<std::size_t>(c.grid.ny);
      const auto nx = static_cast<std::size_t>(c.grid.nx);
      index[2 * k + 1] = static_cast<int>(rem % ny);
      rem /= ny;
      index[2 * k] = static_cast<int>(rem % nx);
      rem /= nx;
    }
    for (std::size_t k = 0; k < nc; ++k) {
      const auto& c = spec.components[k];
      placements[k].component = c.name;
      placements[k].position = {grid_coordinate(c.bounds.xmin, c.bounds.xmax, c.grid.nx, index[2 * k]),
                                grid_coordinate(c.bounds.ymin, c.bounds.ymax, c.grid.ny, index[2 * k + 1])};
    }
    MorphologySample s;
    s.id = id;
    s.placements = placements;
    s.grid_index = index;
    s.body = aggregate_body_params(spec, placements);
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace mvam
