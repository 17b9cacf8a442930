#include "topo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "topo/error.hpp"
#include "topo/geometry/sweep.hpp"

namespace topo {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

// min/avr; an empty or all-zero set counts as uniform.
double min_over_mean(const std::vector<double>& xs) {
  if (xs.empty()) return 1.0;
  const double lo = *std::min_element(xs.begin(), xs.end());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (mean <= 0.0) return 1.0;
  return std::clamp(lo / mean, 0.0, 1.0);
}

// Direction of a vector in degrees, [0, 360).
double heading(const Point& d) {
  double a = std::atan2(d.y, d.x) * kDeg;
  if (a < 0) a += 360.0;
  if (a >= 360.0) a -= 360.0;
  return a;
}

double angle_between(const Point& a, const Point& b) {
  const double c = std::atan2(std::abs(cross(a, b)), dot(a, b)) * kDeg;
  return std::clamp(c, 0.0, 180.0);
}

}  // namespace

std::size_t count_crossings(std::span<const Segment> segments, bool brute_force) {
  return brute_force ? geom::brute_force_intersections(segments).size() : geom::sweep_intersections(segments).size();
}

std::size_t count_crossings(const PowerGraph& g, const Layout& layout) {
  const std::vector<Point> pos = positions(g, layout);
  const std::vector<Segment> segs = edge_segments(g, pos);
  return count_crossings(segs);
}

MetricsReport compute_metrics(const PowerGraph& g, const Layout& layout, const Layout* reference,
                              double neighbor_fraction) {
  const std::size_t n = g.node_count();
  if (n < 2) throw ValidationError("metrics are undefined for fewer than 2 nodes");
  if (!(neighbor_fraction > 0.0)) throw ValidationError("neighbor fraction must be positive");
  const std::vector<Point> pos = positions(g, layout);
  const std::vector<Segment> segs = edge_segments(g, pos);

  MetricsReport r;
  // a dummy node stands for a crossing of the underlying drawing
  std::size_t dummies = 0;
  for (const Node& nd : g.nodes()) dummies += nd.kind == NodeKind::dummy ? 1 : 0;
  r.ex = -static_cast<long long>(count_crossings(segs) + dummies);

  std::vector<double> lengths;
  std::vector<double> deviations;
  for (const Segment& s : segs) {
    lengths.push_back(distance(s.p, s.q));
    double theta = heading(s.q - s.p);
    if (theta >= 180.0) theta -= 180.0;
    deviations.push_back(std::min({theta, std::abs(90.0 - theta), 180.0 - theta}) / 45.0);
  }
  r.el = min_over_mean(lengths);
  if (!deviations.empty())
    r.orth = 1.0 - std::accumulate(deviations.begin(), deviations.end(), 0.0) / static_cast<double>(deviations.size());

  std::vector<double> nearest;
  std::vector<double> resolution;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nb = g.neighbors(v);
    if (nb.empty()) continue;
    double d = INFINITY;
    std::vector<double> dirs;
    for (std::size_t w : nb) {
      d = std::min(d, distance(pos[v], pos[w]));
      dirs.push_back(heading(pos[w] - pos[v]));
    }
    nearest.push_back(d);
    std::sort(dirs.begin(), dirs.end());
    double gap = 360.0;
    if (dirs.size() > 1) {
      gap = dirs.front() + 360.0 - dirs.back();
      for (std::size_t k = 1; k < dirs.size(); ++k) gap = std::min(gap, dirs[k] - dirs[k - 1]);
    }
    resolution.push_back(gap / (360.0 / static_cast<double>(dirs.size())));
  }
  r.nd = min_over_mean(nearest);
  r.ia = min_over_mean(resolution);

  if (reference) {
    double sum = 0.0;
    std::size_t used = 0;
    for (const Edge& e : g.edges()) {
      const NodeId& a = g.node(e.a).id;
      const NodeId& b = g.node(e.b).id;
      if (!reference->contains(a) || !reference->contains(b)) continue;
      const Point d0 = reference->at(b) - reference->at(a);
      const Point d1 = pos[e.b] - pos[e.a];
      if (d0 == Point{0, 0}) throw ValidationError("reference layout has coincident endpoints on an edge");
      sum += angle_between(d0, d1);
      ++used;
    }
    r.rp = used == 0 ? 1.0 : 1.0 - sum / static_cast<double>(used) / 180.0;
  }

  std::size_t m = static_cast<std::size_t>(std::ceil(neighbor_fraction * static_cast<double>(n) - 1e-9));
  m = std::clamp<std::size_t>(m, 1, n - 1);
  std::vector<double> knn;
  knn.reserve(n * m);
  std::vector<double> row(n - 1);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t k = 0;
    for (std::size_t w = 0; w < n; ++w)
      if (w != v) row[k++] = distance(pos[v], pos[w]);
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m), row.end());
    knn.insert(knn.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m));
  }
  const auto [lo_it, hi_it] = std::minmax_element(knn.begin(), knn.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  double mean = 0.0, var = 0.0;
  if (span > 0.0) {
    for (double& x : knn) x = (x - lo) / span;
    mean = std::accumulate(knn.begin(), knn.end(), 0.0) / static_cast<double>(knn.size());
    for (double x : knn) var += (x - mean) * (x - mean);
    var /= static_cast<double>(knn.size());
  }
  r.ev = var == 0.0 ? 0.0 : -var;
  return r;
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j{{"ex", ex}, {"el", el}, {"nd", nd}, {"ia", ia}, {"or", orth}, {"ev", ev}};
  j["rp"] = rp ? nlohmann::json(*rp) : nlohmann::json(nullptr);
  return j;
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
  MetricsReport r;
  r.ex = j.at("ex").get<long long>();
  r.el = j.at("el").get<double>();
  r.nd = j.at("nd").get<double>();
  r.ia = j.at("ia").get<double>();
  if (j.contains("rp") && !j.at("rp").is_null()) r.rp = j.at("rp").get<double>();
  r.orth = j.at("or").get<double>();
  r.ev = j.at("ev").get<double>();
  return r;
}

std::string MetricsReport::table() const {
  std::string out = fmt::format("{:<8}{:>14}\n", "metric", "value");
  out += fmt::format("{:<8}{:>14}\n", "m_EX", ex);
  out += fmt::format("{:<8}{:>14.6f}\n", "m_EL", el);
  out += fmt::format("{:<8}{:>14.6f}\n", "m_ND", nd);
  out += fmt::format("{:<8}{:>14.6f}\n", "m_IA", ia);
  if (rp)
    out += fmt::format("{:<8}{:>14.6f}\n", "m_RP", *rp);
  else
    out += fmt::format("{:<8}{:>14}\n", "m_RP", "-");
  out += fmt::format("{:<8}{:>14.6f}\n", "m_OR", orth);
  out += fmt::format("{:<8}{:>14.6f}\n", "m_EV", ev);
  return out;
}

Layout force_directed_baseline(const PowerGraph& g, std::uint64_t seed, int iterations) {
  if (iterations <= 0) throw ValidationError("iterations must be positive");
  const std::size_t n = g.node_count();
  Layout out;
  if (n == 0) return out;
  std::mt19937_64 rng(seed);
  const double side = std::sqrt(static_cast<double>(n));
  std::uniform_real_distribution<double> unif(0.0, side);
  std::vector<Point> p(n);
  for (Point& q : p) q = {unif(rng), unif(rng)};
  const double k = side / std::sqrt(static_cast<double>(n));  // ideal edge length
  double temp = side / 10.0;
  const double cool = temp / static_cast<double>(iterations + 1);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  std::vector<Point> disp(n);
  for (int it = 0; it < iterations; ++it) {
    std::fill(disp.begin(), disp.end(), Point{0, 0});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        Point d = p[i] - p[j];
        double len = norm(d);
        if (len < 1e-9) {
          d = {jitter(rng), jitter(rng)};
          len = norm(d);
        }
        const Point f = d * (k * k / (len * len));
        disp[i] = disp[i] + f;
        disp[j] = disp[j] - f;
      }
    for (const Edge& e : g.edges()) {
      const Point d = p[e.a] - p[e.b];
      const double len = norm(d);
      const Point f = d * (len / k);
      disp[e.a] = disp[e.a] - f;
      disp[e.b] = disp[e.b] + f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double len = norm(disp[i]);
      if (len > 0) p[i] = p[i] + disp[i] * (std::min(len, temp) / len);
    }
    temp = std::max(temp - cool, 1e-4 * side);
  }
  for (std::size_t i = 0; i < n; ++i) out.set(g.node(i).id, p[i]);
  return out;
}

}  // namespace topo
