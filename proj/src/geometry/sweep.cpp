#include "topo/geometry/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "topo/error.hpp"
#include "topo/geometry/predicates.hpp"

namespace topo::geom {

std::vector<std::size_t> CrossingReport::per_segment(std::size_t segment_count) const {
  std::vector<std::size_t> counts(segment_count, 0);
  for (const Crossing& c : pairs) {
    ++counts[c.a];
    ++counts[c.b];
  }
  return counts;
}

namespace {

bool lex_less(const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

void check_input(std::span<const Segment> segments) {
  double scale = 1.0;
  std::vector<std::pair<Point, std::size_t>> ends;
  ends.reserve(2 * segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (!std::isfinite(s.p.x) || !std::isfinite(s.p.y) || !std::isfinite(s.q.x) || !std::isfinite(s.q.y))
      throw ValidationError("segment " + std::to_string(i) + " has non-finite coordinates");
    if (s.p == s.q) throw ValidationError("segment " + std::to_string(i) + " has zero length");
    scale = std::max({scale, std::fabs(s.p.x), std::fabs(s.p.y), std::fabs(s.q.x), std::fabs(s.q.y)});
    ends.push_back({s.p, i});
    ends.push_back({s.q, i});
  }
  const double tol = kExactnessThreshold * scale;
  std::sort(ends.begin(), ends.end(), [](const auto& l, const auto& r) { return lex_less(l.first, r.first); });
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size() && ends[j].first.x - ends[i].first.x <= tol; ++j) {
      const Point& a = ends[i].first;
      const Point& b = ends[j].first;
      if (a == b) continue;
      if (std::fabs(a.y - b.y) <= tol)
        throw DegeneracyError("segments " + std::to_string(ends[i].second) + " and " + std::to_string(ends[j].second) +
                              " have numerically coincident endpoints");
    }
  }
}

void sort_report(CrossingReport& r) {
  std::sort(r.pairs.begin(), r.pairs.end(),
            [](const Crossing& l, const Crossing& c) { return l.a != c.a ? l.a < c.a : l.b < c.b; });
}

struct SweepSegment {
  Point l;  // lexicographically smaller endpoint
  Point r;
  bool vertical = false;
  Line line;
};

class Sweep {
 public:
  explicit Sweep(std::span<const Segment> segments) : status_(Order{this}) {
    segs_.reserve(segments.size());
    for (const Segment& s : segments) {
      SweepSegment w;
      w.l = lex_less(s.p, s.q) ? s.p : s.q;
      w.r = lex_less(s.p, s.q) ? s.q : s.p;
      w.vertical = w.l.x == w.r.x;
      w.line = Line{w.l, w.r};
      segs_.push_back(w);
    }
  }

  CrossingReport run() {
    for (std::size_t i = 0; i < segs_.size(); ++i) {
      events_[ExactPoint(segs_[i].l)].push_back(i);
      events_.try_emplace(ExactPoint(segs_[i].r));
    }
    while (!events_.empty()) {
      auto node = events_.extract(events_.begin());
      cur_ = node.key();
      handle(node.mapped());
    }
    sort_report(report_);
    return std::move(report_);
  }

 private:
  struct Probe {};

  // Sign of (y of segment s on the sweep line) - (y of segment t), or minus
  // the current event y when t is absent.
  int compare_height(std::size_t s, const std::size_t* t) const {
    if (through_event(s) && (!t || through_event(*t))) return 0;
    return filtered_sign([&](auto tag) {
      using T = typename decltype(tag)::type;
      return height<T>(s) - (t ? height<T>(*t) : coord_y<T>(cur_));
    });
  }

  // Cheap proof that segment s contains the current event point.
  bool through_event(std::size_t s) const {
    const SweepSegment& w = segs_[s];
    if (cur_.is_base()) return w.l == cur_.base() || w.r == cur_.base();
    auto same = [](const Line& a, const Line& b) { return a.p == b.p && a.q == b.q; };
    return same(w.line, cur_.first_line()) || same(w.line, cur_.second_line());
  }

  template <class T>
  T height(std::size_t s) const {
    const SweepSegment& w = segs_[s];
    if (w.vertical) return coord_y<T>(cur_);
    const T lx = lift<T>(w.l.x), ly = lift<T>(w.l.y);
    return ly + (coord_x<T>(cur_) - lx) * (lift<T>(w.r.y) - ly) / (lift<T>(w.r.x) - lx);
  }

  // -1 if slope(s) < slope(t), verticals steepest.
  int compare_slope(std::size_t s, std::size_t t) const {
    const SweepSegment& a = segs_[s];
    const SweepSegment& b = segs_[t];
    if (a.vertical || b.vertical) return (a.vertical ? 1 : 0) - (b.vertical ? 1 : 0);
    return -cross_sign(a.l, a.r, b.l, b.r);
  }

  bool less(std::size_t s, std::size_t t) const {
    if (s == t) return false;
    if (const int c = compare_height(s, &t); c != 0) return c < 0;
    const int sl = compare_slope(s, t);
    if (sl == 0) return s < t;
    // Common point above the event: order just before it; otherwise just after.
    const int above = compare_height(s, nullptr);
    return above > 0 ? sl > 0 : sl < 0;
  }

  struct Order {
    const Sweep* sweep;
    using is_transparent = void;
    bool operator()(std::size_t s, std::size_t t) const { return sweep->less(s, t); }
    bool operator()(std::size_t s, Probe) const { return sweep->compare_height(s, nullptr) < 0; }
    bool operator()(Probe, std::size_t s) const { return sweep->compare_height(s, nullptr) > 0; }
  };

  void schedule(std::size_t s, std::size_t t) {
    const SweepSegment& a = segs_[s];
    const SweepSegment& b = segs_[t];
    if (!segments_cross(Segment{a.l, a.r}, Segment{b.l, b.r})) return;
    ExactPoint x = ExactPoint::meet(a.line, b.line);
    if (compare_xy(x, cur_) > 0) events_.try_emplace(std::move(x));
  }

  void handle(const std::vector<std::size_t>& starting) {
    auto [lo, hi] = status_.equal_range(Probe{});
    std::vector<std::size_t> interior;
    for (auto it = lo; it != hi; ++it) {
      if (same_point(ExactPoint(segs_[*it].r), cur_)) continue;
      interior.push_back(*it);
    }
    for (std::size_t i = 0; i < interior.size(); ++i) {
      for (std::size_t j = i + 1; j < interior.size(); ++j) {
        const SweepSegment& a = segs_[interior[i]];
        const SweepSegment& b = segs_[interior[j]];
        if (cross_sign(a.l, a.r, b.l, b.r) == 0) continue;
        report_.pairs.push_back(Crossing{std::min(interior[i], interior[j]), std::max(interior[i], interior[j]),
                                         cur_.approx()});
      }
    }
    status_.erase(lo, hi);
    for (std::size_t s : interior) status_.insert(s);
    for (std::size_t s : starting) status_.insert(s);

    if (interior.empty() && starting.empty()) {
      auto above = status_.lower_bound(Probe{});
      if (above != status_.end() && above != status_.begin()) schedule(*std::prev(above), *above);
      return;
    }
    auto [first, last] = status_.equal_range(Probe{});
    if (first != status_.begin()) schedule(*std::prev(first), *first);
    auto top = std::prev(last);
    if (last != status_.end()) schedule(*top, *last);
  }

  std::vector<SweepSegment> segs_;
  std::map<ExactPoint, std::vector<std::size_t>, ExactLess> events_;
  std::set<std::size_t, Order> status_;
  ExactPoint cur_;
  CrossingReport report_;
};

}  // namespace

CrossingReport sweep_intersections(std::span<const Segment> segments) {
  check_input(segments);
  return Sweep(segments).run();
}

CrossingReport brute_force_intersections(std::span<const Segment> segments) {
  check_input(segments);
  CrossingReport report;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      if (!segments_cross(segments[i], segments[j])) continue;
      const Line a{segments[i].p, segments[i].q};
      const Line b{segments[j].p, segments[j].q};
      report.pairs.push_back(Crossing{i, j, ExactPoint::meet(a, b).approx()});
    }
  }
  return report;
}

}  // namespace topo::geom
