#include "topo/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "topo/edits.hpp"
#include "topo/error.hpp"

namespace topo {

namespace {

double sq(const Point& a, const Point& b) {
  const Point d = a - b;
  return dot(d, d);
}

std::size_t nearest(const Point& p, const std::vector<Point>& centers) {
  std::size_t best = 0;
  double bd = INFINITY;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = sq(p, centers[c]);
    if (d < bd) {
      bd = d;
      best = c;
    }
  }
  return best;
}

struct Box {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  void add(const Point& p) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  double w() const { return x1 - x0; }
  double h() const { return y1 - y0; }
};

}  // namespace

int default_cluster_count(std::size_t node_count) {
  return std::max(1, static_cast<int>((node_count + 63) / 64));
}

PartitionPlan partition_kmeans(const PowerGraph& g, const Layout& layout, int k, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw ConfigError(fmt::format("cluster count {} must be within [1, {}]", k, n));
  const std::vector<Point> pts = positions(g, layout);
  std::mt19937_64 rng(seed);

  // k-means++ seeding
  std::vector<Point> centers;
  std::vector<double> d2(n, INFINITY);
  centers.push_back(pts[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq(pts[i], centers.back()));
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0) {
      double r = std::uniform_real_distribution<double>(0.0, total)(rng);
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0) continue;
        pick = i;
        r -= d2[i];
        if (r < 0) break;
      }
    }
    if (pick == n) throw ValidationError("fewer distinct positions than clusters");
    centers.push_back(pts[pick]);
  }

  std::vector<std::size_t> assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) assign[i] = nearest(pts[i], centers);
  for (int it = 0; it < 300; ++it) {
    std::vector<Point> sum(centers.size(), Point{0, 0});
    std::vector<std::size_t> size(centers.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[assign[i]] = sum[assign[i]] + pts[i];
      ++size[assign[i]];
    }
    for (std::size_t c = 0; c < centers.size(); ++c)
      if (size[c]) centers[c] = sum[c] * (1.0 / static_cast<double>(size[c]));
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (size[c]) continue;
      // re-seed at the point farthest from its own centroid
      std::size_t far = 0;
      double fd = -1;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = sq(pts[i], centers[assign[i]]);
        if (d > fd && size[assign[i]] > 1) {
          fd = d;
          far = i;
        }
      }
      --size[assign[far]];
      assign[far] = c;
      size[c] = 1;
      centers[c] = pts[far];
    }
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest(pts[i], centers);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    if (!changed && std::all_of(size.begin(), size.end(), [](std::size_t s) { return s > 0; })) break;
  }
  // a last empty-cluster repair
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (std::count(assign.begin(), assign.end(), c)) continue;
    std::vector<std::size_t> size(centers.size(), 0);
    for (std::size_t a : assign) ++size[a];
    std::size_t far = 0;
    double fd = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = sq(pts[i], centers[assign[i]]);
      if (d > fd && size[assign[i]] > 1) {
        fd = d;
        far = i;
      }
    }
    assign[far] = c;
  }

  PartitionPlan plan;
  plan.k = k;
  std::vector<int> label(centers.size(), -1);
  int next = 0;
  plan.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (label[assign[i]] < 0) label[assign[i]] = next++;
    plan.assignment[i] = label[assign[i]];
  }
  plan.submodels.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    Submodel& s = plan.submodels[static_cast<std::size_t>(plan.assignment[i])];
    const Node& nd = g.node(i);
    s.graph.add_node(nd.id, nd.kind, nd.label);
    s.layout.set(nd.id, pts[i]);
    s.nodes.push_back(i);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const int ca = plan.assignment[ed.a], cb = plan.assignment[ed.b];
    if (ca != cb) {
      plan.tie_lines.push_back(e);
      continue;
    }
    plan.submodels[static_cast<std::size_t>(ca)].graph.add_edge(g.node(ed.a).id, g.node(ed.b).id, ed.count);
  }
  return plan;
}

nlohmann::json PartitionPlan::to_json(const PowerGraph& g) const {
  nlohmann::json assign = nlohmann::json::object();
  for (std::size_t i = 0; i < assignment.size(); ++i) assign[g.node(i).id.str()] = assignment[i];
  nlohmann::json ties = nlohmann::json::array();
  for (std::size_t e : tie_lines) ties.push_back({g.node(g.edge(e).a).id.str(), g.node(g.edge(e).b).id.str()});
  return {{"k", k}, {"assignment", std::move(assign)}, {"tie_lines", std::move(ties)}};
}

ClusterOutcome run_cluster(const PowerGraph& g, const Layout& layout, const PipelineConfig& cfg) {
  ClusterOutcome out;
  out.graph = g;
  out.layout = layout;
  if (g.node_count() == 0) return out;
  try {
    if (cfg.reduce) {
      ReductionResult r = reduce_crossings(g, layout, cfg.reduction);
      out.graph = std::move(r.graph);
      out.layout = std::move(r.layout);
    }
    const auto pos = positions(out.graph, out.layout);
    const geom::CrossingReport rep = geom::sweep_intersections(edge_segments(out.graph, pos));
    out.reduced_crossings = rep.size();
    if (!cfg.plan || out.graph.edge_count() == 0) return out;
    const GraphLayout planar = planarize_with_dummies(out.graph, out.layout, rep);
    auto backend = milp::make_backend(cfg.backend);
    milp::PlanResult plan = milp::plan_by_component(planar.graph, planar.layout, cfg.planner, *backend);
    out.rounds = plan.rounds;
    if (!plan.planar) {
      out.error = fmt::format("layout still has intersecting edges after {} rounds", plan.rounds.size());
      out.error_kind = "infeasible";
      return out;
    }
    out.graph = planar.graph;
    out.layout = std::move(plan.layout);
    out.optimized = true;
  } catch (const Error& ex) {
    out.error = ex.what();
    out.error_kind = ex.kind();
  } catch (const std::exception& ex) {
    out.error = ex.what();
    out.error_kind = "error";
  }
  return out;
}

std::vector<ClusterOutcome> solve_partitions_parallel(const PartitionPlan& plan, const PipelineConfig& cfg,
                                                      int workers) {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  const std::size_t n = plan.submodels.size();
  std::vector<ClusterOutcome> out(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++)
      out[i] = run_cluster(plan.submodels[i].graph, plan.submodels[i].layout, cfg);
  };
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return out;
}

Assembly assemble_layout(const PowerGraph& g, const Layout& original, const PartitionPlan& plan,
                         const std::vector<ClusterOutcome>& clusters) {
  if (clusters.size() != plan.submodels.size()) throw ValidationError("one outcome per cluster is required");
  Assembly a;
  for (const Node& nd : g.nodes()) a.graph.add_node(nd.id, nd.kind, nd.label);
  std::vector<Box> placed(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const Submodel& sub = plan.submodels[c];
    const ClusterOutcome& oc = clusters[c];
    Point c0{0, 0}, c1{0, 0};
    Box b0, b1;
    for (std::size_t v : sub.nodes) {
      const NodeId& id = g.node(v).id;
      const Point p0 = original.at(id);
      const Point p1 = oc.layout.at(id);
      c0 = c0 + p0;
      c1 = c1 + p1;
      b0.add(p0);
    }
    const double cnt = static_cast<double>(std::max<std::size_t>(sub.nodes.size(), 1));
    c0 = c0 * (1.0 / cnt);
    c1 = c1 * (1.0 / cnt);
    for (const Node& nd : oc.graph.nodes()) b1.add(oc.layout.at(nd.id));
    double f = INFINITY;
    if (b0.w() > 0 && b1.w() > 0) f = std::min(f, b0.w() / b1.w());
    if (b0.h() > 0 && b1.h() > 0) f = std::min(f, b0.h() / b1.h());
    if (!std::isfinite(f)) f = 1.0;
    const bool identity = f == 1.0 && c0 == c1;
    auto place = [&](const Point& p) { return identity ? p : c0 + (p - c1) * f; };

    // auxiliary nodes get fresh global ids
    std::unordered_map<NodeId, NodeId> rename;
    for (const Node& nd : oc.graph.nodes()) {
      if (nd.kind == NodeKind::real) {
        rename.emplace(nd.id, nd.id);
        continue;
      }
      const NodeId fresh = next_reserved_id(
          a.graph, nd.kind == NodeKind::dummy ? kDummyPrefix : kInflectionPrefix);
      a.graph.add_node(fresh, nd.kind, nd.label);
      rename.emplace(nd.id, fresh);
    }
    for (const Node& nd : oc.graph.nodes()) {
      const Point p = place(oc.layout.at(nd.id));
      a.layout.set(rename.at(nd.id), p);
      placed[c].add(p);
    }
    for (const Edge& e : oc.graph.edges())
      a.graph.add_edge(rename.at(oc.graph.node(e.a).id), rename.at(oc.graph.node(e.b).id), e.count);
  }
  a.tie_line.assign(a.graph.edge_count(), 0);
  for (std::size_t e : plan.tie_lines) {
    const Edge& ed = g.edge(e);
    a.graph.add_edge(g.node(ed.a).id, g.node(ed.b).id, ed.count);
    a.tie_line.push_back(1);
  }

  const std::vector<Point> pos = positions(a.graph, a.layout);
  a.crossings = geom::sweep_intersections(edge_segments(a.graph, pos));
  for (const geom::Crossing& x : a.crossings.pairs) {
    if (a.tie_line[x.a] || a.tie_line[x.b])
      ++a.tie_line_crossings;
    else
      ++a.internal_crossings;
  }
  for (std::size_t c = 0; c < placed.size(); ++c)
    for (std::size_t d = c + 1; d < placed.size(); ++d) {
      const double w = std::min(placed[c].x1, placed[d].x1) - std::max(placed[c].x0, placed[d].x0);
      const double h = std::min(placed[c].y1, placed[d].y1) - std::max(placed[c].y0, placed[d].y0);
      if (w > 0 && h > 0)
        a.warnings.push_back(fmt::format("clusters {} and {} overlap by area {:.6g}", c, d, w * h));
    }
  return a;
}

}  // namespace topo
