#include "mvam/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvam/error.hpp"

namespace mvam {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = pts[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0.0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

MarginResult stability_margin(const Vec2& com, std::span<const Vec2> contacts) {
  if (contacts.empty()) throw Error("stability margin needs at least one contact point");
  const std::vector<Vec2> hull = convex_hull(contacts);
  if (hull.size() == 1) return {-norm(com - hull[0]), true};
  if (hull.size() == 2) return {-point_segment_distance(com, hull[0], hull[1]), true};

  double dist = std::numeric_limits<double>::infinity();
  bool inside = true;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    dist = std::min(dist, point_segment_distance(com, a, b));
    if (cross(b - a, com - a) < 0.0) inside = false;
  }
  return {inside ? dist : -dist, false};
}

MarginResult sagittal_margin(double com_x, std::span<const double> contact_x) {
  if (contact_x.empty()) throw Error("stability margin needs at least one contact point");
  const auto [lo, hi] = std::minmax_element(contact_x.begin(), contact_x.end());
  if (*lo == *hi) return {-std::abs(com_x - *lo), true};
  return {std::min(com_x - *lo, *hi - com_x), false};
}

}  // namespace mvam
