#pragma once

#include <span>
#include <vector>

#include "mvam/vec2.hpp"

namespace mvam {

struct MarginResult {
  double margin = 0.0;      // m; positive inside, zero on the boundary, negative outside
  bool degenerate = false;  // fewer than three non-collinear points (2D) or one point (1D)
};

// Signed distance from the projected COM to the boundary of the convex hull of
// the contact points. Degenerate hulls (a point or a segment) have no interior,
// so the result is minus the distance to the hull.
MarginResult stability_margin(const Vec2& com, std::span<const Vec2> contacts);

// Sagittal-plane version: the support polygon is the interval spanned by the
// contact x coordinates on the ground line.
MarginResult sagittal_margin(double com_x, std::span<const double> contact_x);

// Counter-clockwise hull without collinear points (Andrew's monotone chain).
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

}  // namespace mvam
