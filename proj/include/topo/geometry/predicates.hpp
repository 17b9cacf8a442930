#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include <boost/multiprecision/gmp.hpp>

#include "topo/point.hpp"

namespace topo::geom {

using Rational = boost::multiprecision::mpq_rational;

// Closed interval with outward rounding. Operations on point intervals stay
// points when the floating-point result is exact.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval of(double v) { return {v, v}; }
  bool is_point() const { return lo == hi; }
  std::optional<int> sign() const {
    if (lo > 0.0) return 1;
    if (hi < 0.0) return -1;
    if (lo == 0.0 && hi == 0.0) return 0;
    return std::nullopt;
  }
  double mid() const { return lo == hi ? lo : 0.5 * lo + 0.5 * hi; }
};

namespace detail {
// Moves at least one ulp outward; the product with epsilon is exact.
inline double down(double v) {
  return v - (std::fabs(v) * std::numeric_limits<double>::epsilon() + std::numeric_limits<double>::denorm_min());
}
inline double up(double v) {
  return v + (std::fabs(v) * std::numeric_limits<double>::epsilon() + std::numeric_limits<double>::denorm_min());
}
inline Interval widen(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi))
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return {down(lo), up(hi)};
}
}  // namespace detail

inline Interval operator+(Interval a, Interval b) {
  if (a.is_point() && b.is_point()) {
    const double s = a.lo + b.lo;
    const double bb = s - a.lo;
    const double err = (a.lo - (s - bb)) + (b.lo - bb);
    if (err == 0.0 && std::isfinite(s)) return Interval::of(s);
  }
  return detail::widen(a.lo + b.lo, a.hi + b.hi);
}

inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }
inline Interval operator-(Interval a, Interval b) { return a + (-b); }

inline Interval operator*(Interval a, Interval b) {
  if (a.is_point() && b.is_point()) {
    const double p = a.lo * b.lo;
    if (std::isfinite(p) && std::fma(a.lo, b.lo, -p) == 0.0) return Interval::of(p);
  }
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = c[0], hi = c[0];
  for (double v : c) {
    if (std::isnan(v)) return detail::widen(NAN, NAN);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return detail::widen(lo, hi);
}

inline Interval operator/(Interval a, Interval b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) return detail::widen(NAN, NAN);
  const double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  double lo = c[0], hi = c[0];
  for (double v : c) {
    if (std::isnan(v)) return detail::widen(NAN, NAN);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return detail::widen(lo, hi);
}

inline int sign_of(const Rational& r) { return r.sign(); }

// Directed supporting line through two distinct double points.
struct Line {
  Point p;
  Point q;
};

// A point that is either an input double point or the intersection of two
// non-parallel lines. Coordinates are known exactly on demand.
class ExactPoint {
 public:
  ExactPoint() = default;
  explicit ExactPoint(Point p);
  static ExactPoint meet(const Line& a, const Line& b);

  bool is_base() const { return !meet_; }
  const Point& base() const { return base_; }  // valid for base points
  Point approx() const;
  const Interval& ix() const { return ix_; }
  const Interval& iy() const { return iy_; }
  const Rational& qx() const;
  const Rational& qy() const;

  // Defining lines; only meaningful for intersection points.
  const Line& first_line() const { return def_[0]; }
  const Line& second_line() const { return def_[1]; }

 private:
  void compute_exact() const;

  Point base_;
  Interval ix_, iy_;
  bool meet_ = false;
  std::array<Line, 2> def_{};
  mutable std::shared_ptr<const std::array<Rational, 2>> exact_;
};

// Coordinates of points in the evaluation number type.
template <class T>
T coord_x(const ExactPoint& p);
template <class T>
T coord_y(const ExactPoint& p);
template <>
inline Interval coord_x<Interval>(const ExactPoint& p) { return p.ix(); }
template <>
inline Interval coord_y<Interval>(const ExactPoint& p) { return p.iy(); }
template <>
inline Rational coord_x<Rational>(const ExactPoint& p) { return p.qx(); }
template <>
inline Rational coord_y<Rational>(const ExactPoint& p) { return p.qy(); }

template <class T>
T lift(double v);
template <>
inline Interval lift<Interval>(double v) { return Interval::of(v); }
template <>
inline Rational lift<Rational>(double v) { return Rational(v); }

// Evaluates f with intervals first and with rationals when the sign is unsure.
// f must be a generic callable taking a type tag.
template <class T>
struct Tag {
  using type = T;
};

template <class F>
int filtered_sign(F&& f) {
  const Interval v = f(Tag<Interval>{});
  if (auto s = v.sign()) return *s;
  return sign_of(f(Tag<Rational>{}));
}

// Sign of cross(b - a, c - a): +1 left turn, -1 right turn, 0 collinear.
int orient(const Point& a, const Point& b, const Point& c);
int orient(const Line& l, const ExactPoint& p);
inline int orient(const Line& l, const Point& p) { return orient(l.p, l.q, p); }
// Sign of cross(b1 - a1, b2 - a2).
int cross_sign(const Point& a1, const Point& b1, const Point& a2, const Point& b2);
inline int cross_sign(const Line& l1, const Line& l2) { return cross_sign(l1.p, l1.q, l2.p, l2.q); }
// Sign of dot(l1.q - l1.p, l2.q - l2.p).
int dot_sign(const Line& l1, const Line& l2);
// Lexicographic (x, then y) comparison.
int compare_xy(const ExactPoint& a, const ExactPoint& b);
inline bool same_point(const ExactPoint& a, const ExactPoint& b) { return compare_xy(a, b) == 0; }
// Sign of dot(l.q - l.p, a - b): position of a relative to b along l.
int compare_along(const Line& l, const ExactPoint& a, const ExactPoint& b);
// Sign of (px - x) for a point p.
int compare_x(const ExactPoint& p, double x);
int compare_y(const ExactPoint& p, double y);

struct ExactLess {
  bool operator()(const ExactPoint& a, const ExactPoint& b) const { return compare_xy(a, b) < 0; }
};

// Proper crossing: interiors meet in a single point, no endpoint involved.
bool segments_cross(const Segment& s, const Segment& t);
// Closed intersection, including touching and collinear overlap.
bool segments_intersect(const Segment& s, const Segment& t);
// Closed point-on-segment test.
bool on_segment(const Segment& s, const Point& p);

}  // namespace topo::geom
