#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mvam/vec2.hpp"

namespace mvam {

// Axis-aligned placement rectangle in the torso frame (origin at the torso
// geometric center, x forward, y up), metres.
struct Bounds {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  bool contains(const Vec2& p, double tol = 1e-12) const noexcept {
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
  }
};

struct GridResolution {
  int nx = 1;
  int ny = 1;
};

// One placeable mass. A mirrored component splits its mass equally between
// (x, y) and (-x, y), which moves Ib without moving Cx.
struct ComponentSpec {
  std::string name;
  double mass = 0.0;          // kg
  Bounds bounds;
  GridResolution grid;
  double own_inertia = 0.0;   // kg m^2 about the component's own COM
  bool mirror_x = false;
};

struct Placement {
  std::string component;
  Vec2 position;
};

enum class KneeDirection {
  Polar,     // hip drives the leg angle, knee drives only leg length
  Forward,   // serial two-link leg, knee ahead of the hip-foot line
  Rearward,  // serial two-link leg, knee behind the hip-foot line
};

// Sign used by the serial-leg joint mapping: thigh = phi + kappa (pi - q) / 2.
constexpr double knee_kappa(KneeDirection k) noexcept {
  switch (k) {
    case KneeDirection::Forward: return 1.0;
    case KneeDirection::Rearward: return -1.0;
    case KneeDirection::Polar: break;
  }
  return 0.0;
}

const char* to_string(KneeDirection k) noexcept;
KneeDirection knee_direction_from_string(const std::string& s);

// Fixed torso and leg dimensions shared by every morphology in a space.
struct Geometry {
  double torso_length = 0.4;     // m
  double torso_height = 0.1;     // m
  double hip_spacing = 0.4;      // front-to-rear hip pivot distance, m
  double leg_link_length = 0.2;  // thigh and shank length, m
  KneeDirection knee = KneeDirection::Rearward;
};

// Inertial decision parameters of one design plus its geometry.
struct BodyParams {
  double mass = 0.0;             // kg
  Vec2 com_offset;               // (Cx, Cy) from the torso geometric center, m
  double inertia_sagittal = 0.0; // Ib about the COM, kg m^2
  Geometry geometry;

  void validate() const;
};

struct BaseStructure {
  double mass = 0.0;
  Vec2 com;
  double inertia = 0.0;  // about its own COM
};

struct DesignSpaceSpec {
  std::vector<ComponentSpec> components;
  BaseStructure base;
  Geometry geometry;
  std::size_t sample_cap = 1'000'000;

  void validate() const;
  const ComponentSpec& component(const std::string& name) const;
};

struct MorphologySample {
  std::size_t id = 0;
  std::vector<Placement> placements;
  // Grid coordinates per component, (ix, iy) interleaved in component order.
  std::vector<int> grid_index;
  BodyParams body;
};

struct PointMass {
  double mass = 0.0;
  Vec2 position;
  double own_inertia = 0.0;
};

struct MassProperties {
  double mass = 0.0;
  Vec2 com;
  double inertia = 0.0;  // about com
};

// Composite COM and parallel-axis inertia. Throws DegenerateDesignError when
// the total mass is not positive.
MassProperties aggregate(std::span<const PointMass> masses);

// Inertia of the masses about an arbitrary reference point.
double inertia_about(std::span<const PointMass> masses, const Vec2& point);

BodyParams aggregate_body_params(const DesignSpaceSpec& spec,
                                 std::span<const Placement> placements);

// Adds a point mass to an existing body (used for payload margins).
BodyParams add_point_mass(const BodyParams& body, double mass, const Vec2& position);

enum class FrontBack { Front, Back, Neutral };
enum class TopBottom { Top, Bottom, Neutral };

struct MorphologyClass {
  FrontBack x = FrontBack::Neutral;
  TopBottom y = TopBottom::Neutral;
  friend bool operator==(const MorphologyClass&, const MorphologyClass&) = default;
};

inline constexpr double kDefaultDeadband = 1e-3;

MorphologyClass classify_morphology(const BodyParams& body, double deadband = kDefaultDeadband);
std::string to_string(const MorphologyClass& c);

// Cartesian grid over every component's bounds. The first component varies
// slowest; within a component x varies slower than y.
std::vector<MorphologySample> enumerate_design_space(const DesignSpaceSpec& spec);

// Number of samples enumerate_design_space would produce, without the cap check.
std::size_t design_space_size(const DesignSpaceSpec& spec);

double grid_coordinate(double lo, double hi, int n, int i) noexcept;

}  // namespace mvam
