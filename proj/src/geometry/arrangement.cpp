#include "topo/geometry/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "topo/error.hpp"

namespace topo::geom {

namespace {

struct Piece {
  Line line;
  std::optional<ExactPoint> lo;
  std::optional<ExactPoint> hi;
  std::vector<Demarcation> labels;
  std::vector<std::size_t> pts;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// Clips the piece to the canvas; false if nothing of positive length remains.
bool clip(Piece& piece, const ConvexPolygon& canvas) {
  const Line& l = piece.line;
  const std::size_t n = canvas.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Line c{canvas[i], canvas[(i + 1) % n]};
    const int s = cross_sign(c, l);
    if (s == 0) {
      if (orient(c, l.p) < 0) return false;
      continue;
    }
    ExactPoint x = ExactPoint::meet(l, c);
    if (s > 0) {
      if (!piece.lo || compare_along(l, x, *piece.lo) > 0) piece.lo = std::move(x);
    } else {
      if (!piece.hi || compare_along(l, x, *piece.hi) < 0) piece.hi = std::move(x);
    }
  }
  if (!piece.lo || !piece.hi) throw std::logic_error("unbounded piece after clipping");
  return compare_along(l, *piece.lo, *piece.hi) < 0;
}

bool within(const Piece& piece, const ExactPoint& x) {
  return compare_along(piece.line, *piece.lo, x) <= 0 && compare_along(piece.line, x, *piece.hi) <= 0;
}

// Direction of a half-edge as (line, sign) for angular sorting.
struct Direction {
  const Line* line;
  int sign;
  int half() const {
    const int sy = sign * ((line->q.y > line->p.y) - (line->q.y < line->p.y));
    const int sx = sign * ((line->q.x > line->p.x) - (line->q.x < line->p.x));
    return (sy > 0 || (sy == 0 && sx > 0)) ? 0 : 1;
  }
};

bool angle_less(const Direction& a, const Direction& b) {
  const int ha = a.half();
  const int hb = b.half();
  if (ha != hb) return ha < hb;
  return cross_sign(*a.line, *b.line) * a.sign * b.sign > 0;
}

}  // namespace

bool Arrangement::EdgeRecord::on_canvas() const {
  return std::any_of(labels.begin(), labels.end(), [](const Demarcation& d) { return d.kind == DemarcationKind::canvas; });
}

Arrangement build_arrangement(std::span<const VisibilityBoundary> boundaries, const ConvexPolygon& canvas) {
  std::vector<LabeledBoundary> labeled;
  labeled.reserve(boundaries.size());
  for (const VisibilityBoundary& b : boundaries) labeled.push_back(LabeledBoundary{b});
  return build_arrangement(labeled, canvas);
}

Arrangement build_arrangement(std::span<const LabeledBoundary> boundaries, const ConvexPolygon& canvas) {
  const std::size_t nc = canvas.size();
  if (nc < 3) throw ValidationError("canvas needs at least three vertices");
  for (std::size_t i = 0; i < nc; ++i)
    if (orient(canvas[i], canvas[(i + 1) % nc], canvas[(i + 2) % nc]) <= 0)
      throw ValidationError("canvas must be strictly convex and counter-clockwise");

  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < nc; ++i) {
    Piece p;
    p.line = Line{canvas[i], canvas[(i + 1) % nc]};
    p.lo = ExactPoint(p.line.p);
    p.hi = ExactPoint(p.line.q);
    p.labels.push_back(Demarcation{DemarcationKind::canvas, npos, npos, npos, p.line});
    pieces.push_back(std::move(p));
  }

  std::map<std::pair<std::pair<double, double>, std::pair<double, double>>, std::size_t> seen_segments, seen_rays;
  auto key = [](const Point& a, const Point& b) { return std::make_pair(std::make_pair(a.x, a.y), std::make_pair(b.x, b.y)); };
  for (const LabeledBoundary& lb : boundaries) {
    const VisibilityBoundary& b = lb.geometry;
    Point z1 = b.edge.p, z2 = b.edge.q;
    auto skey = (z1.x < z2.x || (z1.x == z2.x && z1.y < z2.y)) ? key(z1, z2) : key(z2, z1);
    if (!seen_segments.count(skey)) {
      Piece p;
      p.line = Line{z1, z2};
      p.lo = ExactPoint(z1);
      p.hi = ExactPoint(z2);
      p.labels.push_back(Demarcation{DemarcationKind::graph_edge, lb.edge, npos, npos, p.line});
      if (clip(p, canvas)) {
        seen_segments.emplace(skey, pieces.size());
        pieces.push_back(std::move(p));
      } else {
        seen_segments.emplace(skey, npos);
      }
    }
    const std::pair<Point, std::size_t> sources[2] = {{z1, lb.first_source}, {z2, lb.second_source}};
    for (const auto& [z, source] : sources) {
      auto rkey = key(b.observer, z);
      if (seen_rays.count(rkey)) continue;
      Piece p;
      p.line = Line{b.observer, z};
      p.lo = ExactPoint(z);
      p.labels.push_back(Demarcation{DemarcationKind::ray, npos, lb.observer, source, p.line});
      if (clip(p, canvas)) {
        seen_rays.emplace(rkey, pieces.size());
        pieces.push_back(std::move(p));
      } else {
        seen_rays.emplace(rkey, npos);
      }
    }
  }

  // Point pool: piece ends and pairwise intersections.
  std::vector<ExactPoint> pool;
  double scale = 1.0;
  for (const Point& c : canvas) scale = std::max({scale, std::fabs(c.x), std::fabs(c.y)});
  const double slack = 1e-7 * scale;
  for (Piece& p : pieces) {
    p.pts.push_back(pool.size());
    pool.push_back(*p.lo);
    p.pts.push_back(pool.size());
    pool.push_back(*p.hi);
    const Point a = p.lo->approx(), b = p.hi->approx();
    p.x0 = std::min(a.x, b.x) - slack;
    p.x1 = std::max(a.x, b.x) + slack;
    p.y0 = std::min(a.y, b.y) - slack;
    p.y1 = std::max(a.y, b.y) + slack;
  }
  std::vector<std::size_t> by_x(pieces.size());
  for (std::size_t i = 0; i < by_x.size(); ++i) by_x[i] = i;
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t l, std::size_t r) { return pieces[l].x0 < pieces[r].x0; });
  for (std::size_t a = 0; a < by_x.size(); ++a) {
    Piece& pi = pieces[by_x[a]];
    for (std::size_t b = a + 1; b < by_x.size() && pieces[by_x[b]].x0 <= pi.x1; ++b) {
      Piece& pj = pieces[by_x[b]];
      if (pj.y0 > pi.y1 || pi.y0 > pj.y1) continue;
      if (cross_sign(pi.line, pj.line) == 0) {
        if (orient(pi.line, pj.line.p) != 0) continue;
        for (std::size_t k : {pj.pts[0], pj.pts[1]})
          if (within(pi, pool[k])) pi.pts.push_back(k);
        for (std::size_t k : {pi.pts[0], pi.pts[1]})
          if (within(pj, pool[k])) pj.pts.push_back(k);
        continue;
      }
      ExactPoint x;
      const Line& l1 = pi.line;
      const Line& l2 = pj.line;
      if (l1.p == l2.p || l1.p == l2.q)
        x = ExactPoint(l1.p);
      else if (l1.q == l2.p || l1.q == l2.q)
        x = ExactPoint(l1.q);
      else
        x = ExactPoint::meet(l1, l2);
      if (!within(pi, x) || !within(pj, x)) continue;
      pi.pts.push_back(pool.size());
      pj.pts.push_back(pool.size());
      pool.push_back(std::move(x));
    }
  }

  // Unify equal points.
  Arrangement arr;
  arr.canvas_ = canvas;
  std::vector<std::size_t> vid(pool.size(), npos);
  {
    std::vector<std::size_t> exact_order(pool.size());
    for (std::size_t i = 0; i < exact_order.size(); ++i) exact_order[i] = i;
    std::stable_sort(exact_order.begin(), exact_order.end(),
                     [&](std::size_t l, std::size_t r) { return compare_xy(pool[l], pool[r]) < 0; });
    for (std::size_t k = 0; k < exact_order.size(); ++k) {
      const std::size_t i = exact_order[k];
      if (k > 0 && same_point(pool[exact_order[k - 1]], pool[i])) {
        vid[i] = vid[exact_order[k - 1]];
        if (!arr.vertices_[vid[i]].is_base() && pool[i].is_base()) arr.vertices_[vid[i]] = pool[i];
        continue;
      }
      vid[i] = arr.vertices_.size();
      arr.vertices_.push_back(pool[i]);
    }
  }

  // Split pieces into edges.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_of;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (const Piece& p : pieces) {
    std::vector<std::size_t> vs;
    vs.reserve(p.pts.size());
    for (std::size_t k : p.pts) vs.push_back(vid[k]);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::sort(vs.begin(), vs.end(), [&](std::size_t l, std::size_t r) {
      return compare_along(p.line, arr.vertices_[l], arr.vertices_[r]) < 0;
    });
    for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
      const auto ekey = std::minmax(vs[k], vs[k + 1]);
      auto [it, fresh] = edge_of.try_emplace({ekey.first, ekey.second}, arr.edges_.size());
      if (fresh) {
        Arrangement::EdgeRecord rec;
        rec.line = p.line;
        rec.labels = p.labels;
        arr.edges_.push_back(std::move(rec));
        ends.push_back({vs[k], vs[k + 1]});
      } else {
        auto& labels = arr.edges_[it->second].labels;
        labels.insert(labels.end(), p.labels.begin(), p.labels.end());
      }
    }
  }

  // Half-edges: 2e runs along the edge line, 2e+1 against it.
  const std::size_t ne = arr.edges_.size();
  arr.halves_.resize(2 * ne);
  std::vector<std::vector<std::size_t>> out(arr.vertices_.size());
  for (std::size_t e = 0; e < ne; ++e) {
    arr.edges_[e].half = 2 * e;
    arr.halves_[2 * e] = {ends[e].first, 2 * e + 1, 0, npos, e, true};
    arr.halves_[2 * e + 1] = {ends[e].second, 2 * e, 0, npos, e, false};
    out[ends[e].first].push_back(2 * e);
    out[ends[e].second].push_back(2 * e + 1);
  }
  auto dir = [&](std::size_t h) {
    return Direction{&arr.edges_[arr.halves_[h].edge].line, arr.halves_[h].forward ? 1 : -1};
  };
  std::vector<std::size_t> slot(2 * ne);
  for (auto& list : out) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) { return angle_less(dir(a), dir(b)); });
    for (std::size_t k = 0; k < list.size(); ++k) slot[list[k]] = k;
  }
  for (std::size_t h = 0; h < 2 * ne; ++h) {
    const std::size_t t = arr.halves_[h].twin;
    const auto& list = out[arr.halves_[t].origin];
    arr.halves_[h].next = list[(slot[t] + list.size() - 1) % list.size()];
  }
  for (std::size_t h = 0; h < 2 * ne; ++h) {
    if (arr.halves_[h].face != npos) continue;
    const std::size_t f = arr.face_start_.size();
    arr.face_start_.push_back(h);
    std::size_t cur = h;
    do {
      arr.halves_[cur].face = f;
      cur = arr.halves_[cur].next;
    } while (cur != h);
  }
  arr.outer_ = npos;
  for (std::size_t e = 0; e < ne && arr.outer_ == npos; ++e)
    if (arr.edges_[e].labels.front().kind == DemarcationKind::canvas) arr.outer_ = arr.halves_[2 * e + 1].face;
  if (arr.outer_ == npos || !arr.euler_holds()) throw std::logic_error("arrangement construction lost planarity");
  return arr;
}

bool Arrangement::euler_holds() const {
  const auto v = static_cast<long long>(vertices_.size());
  const auto e = static_cast<long long>(edges_.size());
  const auto f = static_cast<long long>(face_start_.size());
  return v - e + f == 2;
}

std::vector<std::size_t> Arrangement::face_cycle(std::size_t f) const {
  std::vector<std::size_t> cycle;
  const std::size_t start = face_start_.at(f);
  std::size_t cur = start;
  do {
    cycle.push_back(cur);
    cur = halves_[cur].next;
  } while (cur != start);
  return cycle;
}

std::vector<Point> Arrangement::face_polygon(std::size_t f) const {
  std::vector<Point> poly;
  for (std::size_t h : face_cycle(f)) poly.push_back(vertices_[halves_[h].origin].approx());
  return poly;
}

int Arrangement::winding(std::size_t f, const Point& p) const {
  int wn = 0;
  for (std::size_t h : face_cycle(f)) {
    const ExactPoint& a = vertices_[halves_[h].origin];
    const ExactPoint& b = vertices_[destination(h)];
    const int side = orient(edges_[halves_[h].edge].line, p) * (halves_[h].forward ? 1 : -1);
    if (compare_y(a, p.y) <= 0) {
      if (compare_y(b, p.y) > 0 && side > 0) ++wn;
    } else if (compare_y(b, p.y) <= 0 && side < 0) {
      --wn;
    }
  }
  return wn;
}

bool Arrangement::on_boundary(std::size_t f, const Point& p) const {
  const ExactPoint x(p);
  for (std::size_t h : face_cycle(f)) {
    const Line& l = edges_[halves_[h].edge].line;
    if (orient(l, p) != 0) continue;
    const int a = compare_along(l, x, vertices_[halves_[h].origin]);
    const int b = compare_along(l, x, vertices_[destination(h)]);
    if (a * b <= 0) return true;
  }
  return false;
}

std::optional<std::size_t> Arrangement::edge_through(const Point& p) const {
  const ExactPoint x(p);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Line& l = edges_[e].line;
    if (orient(l, p) != 0) continue;
    const int a = compare_along(l, x, vertices_[halves_[2 * e].origin]);
    const int b = compare_along(l, x, vertices_[halves_[2 * e + 1].origin]);
    if (a * b <= 0) return e;
  }
  return std::nullopt;
}

bool Arrangement::strictly_inside(std::size_t f, const Point& p) const {
  if (f == outer_) return false;
  return !on_boundary(f, p) && winding(f, p) != 0;
}

std::size_t Arrangement::locate(const Point& p) const {
  if (!contains(canvas_, p)) throw ValidationError("query point outside the canvas");
  if (auto e = edge_through(p)) {
    const std::size_t f = halves_[2 * *e].face;
    return f != outer_ ? f : halves_[2 * *e + 1].face;
  }
  for (std::size_t f = 0; f < face_start_.size(); ++f)
    if (f != outer_ && winding(f, p) != 0) return f;
  throw std::logic_error("point location failed");
}

std::optional<Point> Arrangement::representative(std::size_t f) const {
  if (f == outer_) return std::nullopt;
  const std::vector<Point> poly = face_polygon(f);
  const std::size_t n = poly.size();
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    const double w = cross(a, b);
    area2 += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;
  }
  if (area2 != 0.0) {
    const Point c{cx / (3.0 * area2), cy / (3.0 * area2)};
    if (std::isfinite(c.x) && std::isfinite(c.y) && strictly_inside(f, c)) return c;
  }
  // Fan chords from vertex 0, longest first.
  std::vector<std::pair<double, Point>> chords;
  for (std::size_t i = 2; i + 1 < n; ++i) chords.push_back({-distance(poly[0], poly[i]), midpoint(poly[0], poly[i])});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Point c{(poly[0].x + poly[i].x + poly[i + 1].x) / 3.0, (poly[0].y + poly[i].y + poly[i + 1].y) / 3.0};
    chords.push_back({0.0, c});
  }
  std::stable_sort(chords.begin(), chords.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  for (const auto& [len, m] : chords)
    if (strictly_inside(f, m)) return m;
  // Nudge edge midpoints inward.
  std::vector<std::pair<double, std::size_t>> sides;
  for (std::size_t i = 0; i < n; ++i) sides.push_back({-distance(poly[i], poly[(i + 1) % n]), i});
  std::stable_sort(sides.begin(), sides.end());
  for (const auto& [neg_len, i] : sides) {
    const Point a = poly[i];
    const Point d = poly[(i + 1) % n] - a;
    const double len = norm(d);
    if (len == 0.0) continue;
    const Point m = midpoint(a, poly[(i + 1) % n]);
    const Point inward{-d.y / len, d.x / len};
    double step = 0.25 * len;
    for (int k = 0; k < 60; ++k, step *= 0.5) {
      const Point c = m + inward * step;
      if (strictly_inside(f, c)) return c;
    }
  }
  return std::nullopt;
}

nlohmann::json Arrangement::debug_json() const {
  nlohmann::json faces = nlohmann::json::array();
  for (std::size_t f = 0; f < face_count(); ++f) {
    nlohmann::json poly = nlohmann::json::array();
    for (const Point& p : face_polygon(f)) poly.push_back({p.x, p.y});
    faces.push_back({{"id", f}, {"outer", f == outer_}, {"polygon", std::move(poly)}});
  }
  return {{"vertices", vertex_count()}, {"edges", edge_count()}, {"faces", std::move(faces)}};
}

}  // namespace topo::geom
