#include "mvam/gait.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mvam/error.hpp"

namespace mvam {

std::string_view leg_name(Leg leg) noexcept {
  switch (leg) {
    case Leg::FrontLeft: return "fl";
    case Leg::FrontRight: return "fr";
    case Leg::RearLeft: return "rl";
    case Leg::RearRight: return "rr";
  }
  return "?";
}

namespace {

constexpr double kPhaseTol = 1e-9;

struct Phase {
  long cycle;
  double fraction;  // in [0, 1)
};

Phase leg_phase(const GaitPlan& plan, Leg leg, double t) {
  const double u = t / plan.period - plan.phase_offsets[index(leg)];
  double k = std::floor(u);
  double frac = u - k;
  if (frac > 1.0 - kPhaseTol) {
    k += 1.0;
    frac = 0.0;
  }
  return {static_cast<long>(k), frac};
}

bool in_stance(const GaitPlan& plan, double fraction) {
  return fraction <= plan.duty_factor + kPhaseTol;
}

}  // namespace

GaitPlan plan_gait(const GaitParams& p, const BodyParams& body) {
  if (!(p.period > 0.0)) throw ConfigError(fmt::format("gait period must be positive, got {}", p.period));
  if (!(p.speed >= 0.0)) throw ConfigError(fmt::format("gait speed must be nonnegative, got {}", p.speed));
  if (!(p.duty_factor > 0.0 && p.duty_factor <= 1.0)) {
    throw ConfigError(fmt::format("duty factor must lie in (0, 1], got {}", p.duty_factor));
  }
  if (!(p.swing_apex >= 0.0)) throw ConfigError("swing apex must be nonnegative");
  if (!(p.stance_height > 0.0)) throw ConfigError("stance height must be positive");
  body.validate();

  GaitPlan plan;
  plan.period = p.period;
  plan.speed = p.speed;
  plan.duty_factor = p.duty_factor;
  plan.phase_offsets = {0.0, 0.5, 0.5, 0.0};
  plan.stride_length = p.speed * p.period;
  plan.stance_height = p.stance_height + body.com_offset.y;
  plan.swing_apex = p.swing_apex;
  plan.leg_link_length = body.geometry.leg_link_length;

  const double half = 0.5 * body.geometry.hip_spacing;
  for (Leg leg : kAllLegs) {
    const Vec2 hip_torso{is_front(leg) ? half : -half, 0.0};
    plan.hip_from_com[index(leg)] = hip_torso - body.com_offset;
  }

  // Stance excursion is symmetric about the hip; the extreme leg vector occurs
  // at touchdown and liftoff.
  const double reach = 2.0 * body.geometry.leg_link_length;
  const double excursion = 0.5 * p.duty_factor * plan.stride_length;
  const double hip_height = p.stance_height;
  const double extreme = std::hypot(excursion, hip_height);
  if (extreme >= reach) {
    // All legs share the geometry, so the front-left leg is the first to fail.
    const Leg leg = Leg::FrontLeft;
    throw InfeasibleGaitError(
        std::string(leg_name(leg)),
        fmt::format("leg '{}' cannot reach its footholds: stance excursion {:.4f} m at hip "
                    "height {:.4f} m needs {:.4f} m, reach is {:.4f} m",
                    leg_name(leg), excursion, hip_height, extreme, reach));
  }
  if (p.swing_apex >= hip_height) {
    throw InfeasibleGaitError(std::string(leg_name(Leg::FrontLeft)),
                              "swing apex reaches the hip height");
  }
  return plan;
}

ComReference com_reference(const GaitPlan& plan, double t) {
  ComReference r;
  r.position = {plan.speed * t, plan.stance_height};
  r.velocity = {plan.speed, 0.0};
  r.acceleration = {0.0, 0.0};
  return r;
}

Vec2 hip_position(const GaitPlan& plan, Leg leg, double t) {
  return com_reference(plan, t).position + plan.hip_from_com[index(leg)];
}

Vec2 foothold(const GaitPlan& plan, Leg leg, long k) {
  const double mid_stance =
      (plan.phase_offsets[index(leg)] + static_cast<double>(k) + 0.5 * plan.duty_factor) * plan.period;
  return {plan.speed * mid_stance + plan.hip_from_com[index(leg)].x, 0.0};
}

FootReference foot_reference(const GaitPlan& plan, Leg leg, double t) {
  const Phase ph = leg_phase(plan, leg, t);
  FootReference out;
  if (in_stance(plan, ph.fraction)) {
    out.stance = true;
    out.position = foothold(plan, leg, ph.cycle);
    return out;
  }
  // Cycloidal swing between consecutive footholds: zero velocity at both ends.
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double swing_time = (1.0 - plan.duty_factor) * plan.period;
  const double s = (ph.fraction - plan.duty_factor) / (1.0 - plan.duty_factor);
  const double ds = 1.0 / swing_time;
  const Vec2 from = foothold(plan, leg, ph.cycle);
  const double dx = foothold(plan, leg, ph.cycle + 1).x - from.x;
  out.position = {from.x + dx * (s - std::sin(two_pi * s) / two_pi),
                  plan.swing_apex * 0.5 * (1.0 - std::cos(two_pi * s))};
  out.velocity = {dx * (1.0 - std::cos(two_pi * s)) * ds,
                  plan.swing_apex * std::numbers::pi * std::sin(two_pi * s) * ds};
  return out;
}

std::array<bool, kLegCount> stance_mask(const GaitPlan& plan, double t) {
  std::array<bool, kLegCount> mask{};
  for (Leg leg : kAllLegs) mask[index(leg)] = in_stance(plan, leg_phase(plan, leg, t).fraction);
  return mask;
}

}  // namespace mvam
