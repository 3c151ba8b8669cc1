#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "mvam/morphology.hpp"
#include "mvam/vec2.hpp"

namespace mvam {

// Four legs projected onto the sagittal plane. Front legs share the front hip
// pivot, rear legs the rear one.
enum class Leg : std::size_t { FrontLeft = 0, FrontRight = 1, RearLeft = 2, RearRight = 3 };
inline constexpr std::size_t kLegCount = 4;
inline constexpr std::array<Leg, kLegCount> kAllLegs = {Leg::FrontLeft, Leg::FrontRight,
                                                         Leg::RearLeft, Leg::RearRight};

constexpr std::size_t index(Leg leg) noexcept { return static_cast<std::size_t>(leg); }
constexpr bool is_front(Leg leg) noexcept {
  return leg == Leg::FrontLeft || leg == Leg::FrontRight;
}
std::string_view leg_name(Leg leg) noexcept;  // "fl", "fr", "rl", "rr"

struct GaitParams {
  double speed = 0.2;          // m/s
  double period = 0.25;        // s
  double duty_factor = 0.6;
  double swing_apex = 0.02;    // m
  double stance_height = 0.35; // COM height of a Cy = 0 design, m
};

struct GaitPlan {
  double period = 0.0;
  double speed = 0.0;
  double duty_factor = 0.0;
  std::array<double, kLegCount> phase_offsets{};
  double stride_length = 0.0;
  // Height of the straight COM line for this body: stance_height + Cy, which
  // keeps the hips at stance_height for every morphology.
  double stance_height = 0.0;
  double swing_apex = 0.0;
  std::array<Vec2, kLegCount> hip_from_com{};  // hip pivot relative to the COM, zero pitch
  double leg_link_length = 0.0;
};

// Diagonal-pair trot: {FL, RR} at phase 0, {FR, RL} at phase 0.5.
GaitPlan plan_gait(const GaitParams& params, const BodyParams& body);

struct ComReference {
  Vec2 position;
  Vec2 velocity;
  Vec2 acceleration;
  double pitch = 0.0;
};

ComReference com_reference(const GaitPlan& plan, double t);

struct FootReference {
  Vec2 position;
  Vec2 velocity;
  bool stance = false;
};

FootReference foot_reference(const GaitPlan& plan, Leg leg, double t);

// Ground contact point of the k-th stance of a leg (k may be negative).
Vec2 foothold(const GaitPlan& plan, Leg leg, long k);

Vec2 hip_position(const GaitPlan& plan, Leg leg, double t);

// Stance set at t; touchdown and liftoff instants both count as stance.
std::array<bool, kLegCount> stance_mask(const GaitPlan& plan, double t);

}  // namespace mvam
