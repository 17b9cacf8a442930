#include "topo/geometry/predicates.hpp"

#include <algorithm>

namespace topo::geom {

namespace {

template <class T>
T lift_x(const Point& p) {
  return lift<T>(p.x);
}
template <class T>
T lift_y(const Point& p) {
  return lift<T>(p.y);
}

template <class T>
T cross_expr(const Point& a1, const Point& b1, const Point& a2, const Point& b2) {
  return (lift_x<T>(b1) - lift_x<T>(a1)) * (lift_y<T>(b2) - lift_y<T>(a2)) -
         (lift_y<T>(b1) - lift_y<T>(a1)) * (lift_x<T>(b2) - lift_x<T>(a2));
}

// Intersection of lines a and b in number type T.
template <class T>
std::array<T, 2> meet_expr(const Line& a, const Line& b) {
  const T ax = lift<T>(a.p.x), ay = lift<T>(a.p.y);
  const T dx = lift<T>(a.q.x) - ax, dy = lift<T>(a.q.y) - ay;
  const T ex = lift<T>(b.q.x) - lift<T>(b.p.x), ey = lift<T>(b.q.y) - lift<T>(b.p.y);
  const T wx = lift<T>(b.p.x) - ax, wy = lift<T>(b.p.y) - ay;
  const T den = dx * ey - dy * ex;
  const T t = (wx * ey - wy * ex) / den;
  return {ax + dx * t, ay + dy * t};
}

}  // namespace

ExactPoint::ExactPoint(Point p) : base_(p), ix_(Interval::of(p.x)), iy_(Interval::of(p.y)) {}

ExactPoint ExactPoint::meet(const Line& a, const Line& b) {
  ExactPoint out;
  out.meet_ = true;
  out.def_ = {a, b};
  const auto iv = meet_expr<Interval>(a, b);
  out.ix_ = iv[0];
  out.iy_ = iv[1];
  if (out.ix_.is_point() && out.iy_.is_point()) {
    // Exactly representable; behave like a base point.
    out.base_ = {out.ix_.lo, out.iy_.lo};
    out.meet_ = false;
    return out;
  }
  if (std::isfinite(out.ix_.lo) && std::isfinite(out.ix_.hi) && std::isfinite(out.iy_.lo) &&
      std::isfinite(out.iy_.hi)) {
    out.base_ = {out.ix_.mid(), out.iy_.mid()};
  } else {
    out.compute_exact();
    out.base_ = {out.exact_->at(0).convert_to<double>(), out.exact_->at(1).convert_to<double>()};
  }
  return out;
}

Point ExactPoint::approx() const { return base_; }

void ExactPoint::compute_exact() const {
  if (exact_) return;
  if (!meet_) {
    exact_ = std::make_shared<const std::array<Rational, 2>>(std::array<Rational, 2>{Rational(base_.x), Rational(base_.y)});
  } else {
    exact_ = std::make_shared<const std::array<Rational, 2>>(meet_expr<Rational>(def_[0], def_[1]));
  }
}

const Rational& ExactPoint::qx() const {
  compute_exact();
  return (*exact_)[0];
}

const Rational& ExactPoint::qy() const {
  compute_exact();
  return (*exact_)[1];
}

int orient(const Point& a, const Point& b, const Point& c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double bound = 3.3306690738754716e-16 * (std::fabs(detleft) + std::fabs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return filtered_sign([&](auto tag) {
    using T = typename decltype(tag)::type;
    return cross_expr<T>(a, b, a, c);
  });
}

int orient(const Line& l, const ExactPoint& p) {
  if (p.is_base()) return orient(l.p, l.q, p.base());
  return filtered_sign([&](auto tag) {
    using T = typename decltype(tag)::type;
    const T px = lift<T>(l.p.x), py = lift<T>(l.p.y);
    return (lift<T>(l.q.x) - px) * (coord_y<T>(p) - py) - (lift<T>(l.q.y) - py) * (coord_x<T>(p) - px);
  });
}

int cross_sign(const Point& a1, const Point& b1, const Point& a2, const Point& b2) {
  return filtered_sign([&](auto tag) {
    using T = typename decltype(tag)::type;
    return cross_expr<T>(a1, b1, a2, b2);
  });
}

int dot_sign(const Line& l1, const Line& l2) {
  return filtered_sign([&](auto tag) {
    using T = typename decltype(tag)::type;
    return (lift<T>(l1.q.x) - lift<T>(l1.p.x)) * (lift<T>(l2.q.x) - lift<T>(l2.p.x)) +
           (lift<T>(l1.q.y) - lift<T>(l1.p.y)) * (lift<T>(l2.q.y) - lift<T>(l2.p.y));
  });
}

int compare_x(const ExactPoint& p, double x) {
  if (p.ix().lo > x) return 1;
  if (p.ix().hi < x) return -1;
  if (p.ix().is_point()) return 0;
  return sign_of(p.qx() - Rational(x));
}

int compare_y(const ExactPoint& p, double y) {
  if (p.iy().lo > y) return 1;
  if (p.iy().hi < y) return -1;
  if (p.iy().is_point()) return 0;
  return sign_of(p.qy() - Rational(y));
}

namespace {
bool same_line(const Line& a, const Line& b) { return a.p == b.p && a.q == b.q; }
}  // namespace

int compare_xy(const ExactPoint& a, const ExactPoint& b) {
  if (!a.is_base() && !b.is_base()) {
    const bool direct = same_line(a.first_line(), b.first_line()) && same_line(a.second_line(), b.second_line());
    const bool swapped = same_line(a.first_line(), b.second_line()) && same_line(a.second_line(), b.first_line());
    if (direct || swapped) return 0;
  }
  auto cmp = [](const Interval& ia, const Interval& ib, const ExactPoint& pa, const ExactPoint& pb,
                bool use_x) -> int {
    if (ia.hi < ib.lo) return -1;
    if (ia.lo > ib.hi) return 1;
    if (ia.is_point() && ib.is_point()) return 0;
    const Rational& ra = use_x ? pa.qx() : pa.qy();
    const Rational& rb = use_x ? pb.qx() : pb.qy();
    return ra < rb ? -1 : (rb < ra ? 1 : 0);
  };
  if (const int c = cmp(a.ix(), b.ix(), a, b, true); c != 0) return c;
  return cmp(a.iy(), b.iy(), a, b, false);
}

int compare_along(const Line& l, const ExactPoint& a, const ExactPoint& b) {
  return filtered_sign([&](auto tag) {
    using T = typename decltype(tag)::type;
    const T dx = lift<T>(l.q.x) - lift<T>(l.p.x);
    const T dy = lift<T>(l.q.y) - lift<T>(l.p.y);
    return dx * (coord_x<T>(a) - coord_x<T>(b)) + dy * (coord_y<T>(a) - coord_y<T>(b));
  });
}

bool segments_cross(const Segment& s, const Segment& t) {
  const int o1 = orient(s.p, s.q, t.p);
  const int o2 = orient(s.p, s.q, t.q);
  if (o1 == 0 || o2 == 0 || o1 == o2) return false;
  const int o3 = orient(t.p, t.q, s.p);
  const int o4 = orient(t.p, t.q, s.q);
  return o3 != 0 && o4 != 0 && o3 != o4;
}

bool on_segment(const Segment& s, const Point& p) {
  if (orient(s.p, s.q, p) != 0) return false;
  return std::min(s.p.x, s.q.x) <= p.x && p.x <= std::max(s.p.x, s.q.x) && std::min(s.p.y, s.q.y) <= p.y &&
         p.y <= std::max(s.p.y, s.q.y);
}

bool segments_intersect(const Segment& s, const Segment& t) {
  const int o1 = orient(s.p, s.q, t.p);
  const int o2 = orient(s.p, s.q, t.q);
  const int o3 = orient(t.p, t.q, s.p);
  const int o4 = orient(t.p, t.q, s.q);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return (o1 == 0 && on_segment(s, t.p)) || (o2 == 0 && on_segment(s, t.q)) || (o3 == 0 && on_segment(t, s.p)) ||
         (o4 == 0 && on_segment(t, s.q));
}

}  // namespace topo::geom
