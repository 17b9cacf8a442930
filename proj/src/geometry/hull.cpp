#include <algorithm>
#include <cmath>

#include "topo/error.hpp"
#include "topo/geometry/arrangement.hpp"

namespace topo::geom {

ConvexPolygon convex_hull(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && orient(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && orient(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {
    // All points collinear: keep the two extremes.
    return {pts.front(), pts.back()};
  }
  return hull;
}

ConvexPolygon bounding_box(std::span<const Point> points, double margin) {
  double x0 = points.front().x, x1 = x0, y0 = points.front().y, y1 = y0;
  for (const Point& p : points) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return {{x0 - margin, y0 - margin}, {x1 + margin, y0 - margin}, {x1 + margin, y1 + margin}, {x0 - margin, y1 + margin}};
}

ConvexPolygon hull_and_offset(std::span<const Point> points, double r) {
  if (points.empty()) throw ValidationError("hull of an empty point set");
  if (!(r >= 0.0)) throw ValidationError("offset radius must be >= 0");
  ConvexPolygon hull = convex_hull(points);
  if (hull.size() < 3) {
    double extent = 0.0;
    for (const Point& p : points) extent = std::max({extent, std::fabs(p.x), std::fabs(p.y)});
    return bounding_box(points, std::max(r, 1e-6 * (1.0 + extent)));
  }
  if (r == 0.0) return hull;
  const std::size_t n = hull.size();
  std::vector<Point> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point p = hull[i];
    const Point q = hull[(i + 1) % n];
    const Point d = q - p;
    const Point out = Point{d.y, -d.x} * (r / norm(d));
    a[i] = p + out;
    b[i] = q + out;
  }
  ConvexPolygon poly(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (k + n - 1) % n;
    const Point r1 = b[i] - a[i];
    const Point r2 = b[k] - a[k];
    const double t = cross(a[k] - a[i], r2) / cross(r1, r2);
    poly[k] = a[i] + r1 * t;
  }
  return poly;
}

bool contains(const ConvexPolygon& poly, const Point& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (orient(poly[i], poly[(i + 1) % n], p) < 0) return false;
  return true;
}

bool intersects(const ConvexPolygon& poly, const Segment& s) {
  if (contains(poly, s.p) || contains(poly, s.q)) return true;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (segments_intersect(Segment{poly[i], poly[(i + 1) % n]}, s)) return true;
  return false;
}

}  // namespace topo::geom
