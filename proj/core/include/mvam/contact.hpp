#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mvam/vec2.hpp"

namespace mvam {

struct Wrench {
  Vec2 force;          // N, world frame
  double moment = 0.0; // N m about the COM, positive counter-clockwise (x forward, z up)
};

// Ground reaction force acting on the robot at one stance foot.
struct ContactForce {
  std::size_t foot = 0;  // index into the stance list passed to the solver
  Vec2 force;
  Vec2 point;
};

inline constexpr double kDefaultFriction = 0.6;

// Minimum-norm distribution sum |F_i|^2 subject to exact force and moment
// balance about `com`, F_z >= 0 and |F_x| <= mu F_z. Throws
// ContactInfeasibleError naming the constraint that cannot be met.
std::vector<ContactForce> distribute_contact_forces(const Wrench& wrench,
                                                    std::span<const Vec2> feet, const Vec2& com,
                                                    double mu = kDefaultFriction);

struct WrenchResidual {
  double force = 0.0;   // |sum F - force|, N
  double moment = 0.0;  // |sum (p - com) x F - moment|, N m
};

WrenchResidual wrench_residual(const Wrench& wrench, std::span<const ContactForce> forces,
                               const Vec2& com);

}  // namespace mvam
