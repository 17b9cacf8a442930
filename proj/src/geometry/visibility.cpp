#include "topo/error.hpp"
#include "topo/geometry/arrangement.hpp"

namespace topo::geom {

VisibilityBoundary visibility_boundary(const Point& u, const Segment& e) {
  if (e.p == e.q) throw ValidationError("visibility boundary against a zero-length edge");
  if (orient(e.p, e.q, u) == 0) throw DegeneracyError("observer lies on the line through the edge");
  auto away = [&](const Point& z) {
    const Point d = z - u;
    return Ray{z, d * (1.0 / norm(d))};
  };
  return VisibilityBoundary{u, e, away(e.p), away(e.q)};
}

bool in_visibility_region(const VisibilityBoundary& b, const Point& p) {
  const Point& u = b.observer;
  const Point& z1 = b.edge.p;
  const Point& z2 = b.edge.q;
  // Shadow: strictly behind e and strictly between the two rays.
  const int side_u = orient(z1, z2, u);
  if (orient(z1, z2, p) != -side_u) return true;
  const int s12 = orient(u, z1, z2);
  return !(orient(u, z1, p) == s12 && orient(u, z2, p) == -s12);
}

}  // namespace topo::geom
