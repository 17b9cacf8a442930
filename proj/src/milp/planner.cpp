#include "topo/milp/planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "topo/error.hpp"
#include "topo/geometry/predicates.hpp"

namespace topo::milp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// cos/sin of i*pi/K, exact on the coordinate axes.
std::pair<double, double> axis(int i, int K) {
  if (i == 0) return {1.0, 0.0};
  if (2 * i == K) return {0.0, 1.0};
  const double a = kPi * i / K;
  return {std::cos(a), std::sin(a)};
}

int wrap(int j, int K) { return ((j % (2 * K)) + 2 * K) % (2 * K); }

// Signed offset of j from sigma on the 2K-cycle, in (-K, K].
int offset(int j, int sigma, int K) {
  int d = wrap(j - sigma, K);
  if (d > K) d -= 2 * K;
  return d;
}

std::vector<int> window_of(int sigma, int s, int K) {
  std::vector<int> out;
  if (2 * s + 1 >= 2 * K) {
    for (int j = 0; j < 2 * K; ++j) out.push_back(j);
    return out;
  }
  for (int d = -s; d <= s; ++d) out.push_back(wrap(sigma + d, K));
  std::sort(out.begin(), out.end());
  return out;
}

double heading(const Point& d) {
  double a = std::atan2(d.y, d.x);
  if (a < 0) a += 2 * kPi;
  if (a >= 2 * kPi) a -= 2 * kPi;
  return a;
}

}  // namespace

void PlannerConfig::validate(const PowerGraph* g) const {
  if (K < 2) throw ConfigError("K must be >= 2");
  if (s < 0) throw ConfigError("s must be >= 0 (the sector window would be empty)");
  if (!(l_min > 0)) throw ConfigError("l_min must be > 0");
  if (!(d_min > 0)) throw ConfigError("d_min must be > 0");
  if (w_rp < 0 || w_or < 0 || w_ev < 0) throw ConfigError("weights must be >= 0");
  if (std::abs(w_rp + w_or + w_ev - 1.0) > 1e-9) throw ConfigError("weights w_rp + w_or + w_ev must sum to 1");
  if (!(relative_gap >= 0)) throw ConfigError("relative_gap must be >= 0");
  if (!(time_limit > 0)) throw ConfigError("time_limit must be > 0");
  if (max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (big_m && !(*big_m > 0)) throw ConfigError("big_m must be > 0");
  if (g && K < min_K(*g))
    throw ConfigError(fmt::format("K = {} is below the degree bound {} (max degree {})", K, min_K(*g), g->max_degree()));
}

int PlannerConfig::window(std::size_t degree) const {
  if (!per_node_s) return s;
  const int d = static_cast<int>(degree);
  return std::max(1, d / 2);  // ceil((d - 1) / 2)
}

SolveOptions PlannerConfig::solve_options() const {
  SolveOptions o;
  o.relative_gap = relative_gap;
  o.time_limit = time_limit;
  return o;
}

int min_K(const PowerGraph& g) { return static_cast<int>(g.max_degree() / 2) + 1; }

int sector_of(const Point& from, const Point& to, int K) {
  if (from == to) throw ValidationError("coincident nodes have no sector");
  const double width = kPi / K;
  const double t = (heading(to - from) - width / 2) / width;
  return wrap(static_cast<int>(std::ceil(t)), K);
}

SectorMap derive_sectors(const PowerGraph& g, const Layout& layout, int K) {
  if (K < 2) throw ConfigError("K must be >= 2");
  const std::vector<Point> pos = positions(g, layout);
  SectorMap out;
  for (const Edge& e : g.edges()) {
    if (pos[e.a] == pos[e.b])
      throw ValidationError("nodes '" + g.node(e.a).id.str() + "' and '" + g.node(e.b).id.str() + "' coincide");
    const int sb = sector_of(pos[e.a], pos[e.b], K);
    out[{e.b, e.a}] = sb;
    out[{e.a, e.b}] = wrap(sb + K, K);
  }
  return out;
}

PlannerConfig suggest_params(const PowerGraph& g, const Layout& layout) {
  const std::vector<Point> pos = positions(g, layout);
  double k_rule = 0.0;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    if (nb.size() < 2) continue;
    std::vector<double> a;
    for (std::size_t w : nb) a.push_back(heading(pos[w] - pos[v]));
    std::sort(a.begin(), a.end());
    // first edge from quadrant I onwards to the last one in quadrant IV
    const double mean = (a.back() - a.front()) / static_cast<double>(nb.size());
    if (mean > 0) k_rule = std::max(k_rule, kPi / mean);
  }
  PlannerConfig cfg;
  cfg.K = std::max({2, min_K(g), static_cast<int>(std::ceil(k_rule - 1e-9))});
  const double maxdeg = static_cast<double>(g.max_degree());
  cfg.s = 1;
  cfg.per_node_s = maxdeg > 2.0 * cfg.K * 2.0 / 3.0;
  return cfg;
}

BuiltModel build_model(const PowerGraph& g, const Layout& layout, const SectorMap& sigma, const PlannerConfig& cfg,
                       const std::set<EdgePair>& planarity_pairs) {
  cfg.validate(&g);
  const int K = cfg.K;
  const std::size_t n = g.node_count();
  const std::size_t m = g.edge_count();
  const std::vector<Point> pos = positions(g, layout);

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Point& p : pos) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const Point center = n ? Point{(x0 + x1) / 2, (y0 + y1) / 2} : Point{0, 0};
  const double diam = n ? std::hypot(x1 - x0, y1 - y0) : 0.0;
  const double R = std::max({diam, (cfg.l_min + cfg.d_min) * static_cast<double>(n) / 2.0, 1.0});
  const double M = cfg.big_m.value_or(2.0 * (2.0 * std::sqrt(2.0) * R));

  BuiltModel b;
  b.canvas_radius = R;
  MilpModel& md = b.model;
  std::vector<std::vector<std::size_t>> z(n), zb(n);
  for (std::size_t v = 0; v < n; ++v) {
    const Point p = pos[v] - center;
    const bool isolated = g.degree(v) == 0;
    b.x.push_back(md.add_var(fmt::format("x_{}", v), VarKind::continuous, isolated ? p.x : -R, isolated ? p.x : R));
    b.y.push_back(md.add_var(fmt::format("y_{}", v), VarKind::continuous, isolated ? p.y : -R, isolated ? p.y : R));
    for (int i = 0; i < K; ++i) {
      z[v].push_back(md.add_var(fmt::format("z_{}_{}", v, i), VarKind::continuous, -2 * R, 2 * R));
      zb[v].push_back(md.add_var(fmt::format("zb_{}_{}", v, i), VarKind::continuous, -2 * R, 2 * R));
    }
    for (int i = 0; i < K; ++i) {
      const auto [c, s] = axis(i, K);
      md.add_constraint(fmt::format("axis_{}_{}", v, i), "coordinate", {{z[v][i], 1.0}, {b.x[v], -c}, {b.y[v], -s}},
                        Sense::eq, 0.0);
      md.add_constraint(fmt::format("perp_{}_{}", v, i), "coordinate", {{zb[v][i], 1.0}, {b.x[v], s}, {b.y[v], -c}},
                        Sense::eq, 0.0);
    }
  }

  // Sector blocks: in_j for sector j of u around v.
  std::map<std::pair<std::size_t, std::size_t>, std::map<int, std::size_t>> in;
  auto block = [&](std::size_t u, std::size_t v, int s) {
    const int sg = sigma.at({u, v});
    auto& ins = in[{u, v}];
    std::vector<Term> pick;
    std::vector<Term> link;
    const std::size_t sec = md.add_var(fmt::format("sec_{}_{}", u, v), VarKind::integer, 0, 2 * K - 1);
    b.sec[{u, v}] = sec;
    link.push_back({sec, 1.0});
    for (int j : window_of(sg, s, K)) {
      const std::size_t var = md.add_var(fmt::format("in_{}_{}_{}", u, v, j), VarKind::binary, 0, 1);
      ins[j] = var;
      pick.push_back({var, 1.0});
      link.push_back({var, -static_cast<double>(j)});
      const int i = j % K;
      md.add_constraint(fmt::format("align_{}_{}_{}_a", u, v, j), "alignment",
                        {{zb[u][i], 1.0}, {zb[v][i], -1.0}, {var, M}}, Sense::le, M);
      md.add_constraint(fmt::format("align_{}_{}_{}_b", u, v, j), "alignment",
                        {{zb[v][i], 1.0}, {zb[u][i], -1.0}, {var, M}}, Sense::le, M);
      const double dir = j < K ? 1.0 : -1.0;
      md.add_constraint(fmt::format("length_{}_{}_{}", u, v, j), "length",
                        {{z[u][i], dir}, {z[v][i], -dir}, {var, -M}}, Sense::ge, cfg.l_min - M);
    }
    md.add_constraint(fmt::format("pick_{}_{}", u, v), "sector", std::move(pick), Sense::eq, 1.0);
    md.add_constraint(fmt::format("sec_{}_{}", u, v), "sector", std::move(link), Sense::eq, 0.0);
  };

  b.hor.assign(m, kNone);
  b.ver.assign(m, kNone);
  b.len.assign(m, kNone);
  b.diff.assign(m, kNone);
  const std::size_t avg = m ? md.add_var("len_avg", VarKind::continuous, 0, 4 * R) : kNone;
  std::vector<Term> avg_row;
  if (m) avg_row.push_back({avg, 1.0});
  const double inv_m = m ? 1.0 / static_cast<double>(m) : 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    const std::size_t a = ed.a, c = ed.b;
    int s = std::max(cfg.window(g.degree(a)), cfg.window(g.degree(c)));
    if (g.node(a).kind == NodeKind::dummy || g.node(c).kind == NodeKind::dummy) s = std::max(s, 1);
    block(c, a, s);
    block(a, c, s);
    const std::size_t wr = md.add_var(fmt::format("wrap_{}", e), VarKind::binary, 0, 1);
    md.add_constraint(fmt::format("antipode_{}", e), "sector",
                      {{b.sec[{a, c}], 1.0}, {b.sec[{c, a}], -1.0}, {wr, 2.0 * K}}, Sense::eq, K);

    // relative position: |offset of sec from sigma| <= diff
    const int sg = sigma.at({c, a});
    const auto& ins = in[{c, a}];
    const std::size_t diff = md.add_var(fmt::format("diff_{}", e), VarKind::integer, 0, K);
    b.diff[e] = diff;
    std::vector<Term> up{{diff, 1.0}}, down{{diff, 1.0}};
    for (const auto& [j, var] : ins) {
      const double off = offset(j, sg, K);
      up.push_back({var, -off});
      down.push_back({var, off});
    }
    md.add_constraint(fmt::format("diff_{}_a", e), "relative", std::move(up), Sense::ge, 0.0);
    md.add_constraint(fmt::format("diff_{}_b", e), "relative", std::move(down), Sense::ge, 0.0);
    md.add_objective(diff, cfg.w_rp);

    // orthogonality
    md.add_objective_offset(cfg.w_or);
    auto flag = [&](const char* tag, std::vector<int> sectors) -> std::size_t {
      std::vector<Term> row;
      for (int j : sectors)
        if (auto it = ins.find(j); it != ins.end()) row.push_back({it->second, -1.0});
      if (row.empty()) return kNone;
      const std::size_t var = md.add_var(fmt::format("{}_{}", tag, e), VarKind::binary, 0, 1);
      row.push_back({var, 1.0});
      md.add_constraint(fmt::format("{}_{}", tag, e), "orthogonal", std::move(row), Sense::le, 0.0);
      md.add_objective(var, -cfg.w_or);
      return var;
    };
    b.hor[e] = flag("hor", {0, K});
    if (K % 2 == 0) b.ver[e] = flag("ver", {K / 2, 3 * K / 2});
    if (b.hor[e] != kNone && b.ver[e] != kNone)
      md.add_constraint(fmt::format("hv_{}", e), "orthogonal", {{b.hor[e], 1.0}, {b.ver[e], 1.0}}, Sense::le, 1.0);

    // length and its deviation from the mean
    const std::size_t len = md.add_var(fmt::format("len_{}", e), VarKind::continuous, 0, 4 * R);
    const std::size_t dev = md.add_var(fmt::format("dev_{}", e), VarKind::continuous, 0, 4 * R);
    b.len[e] = len;
    for (int i = 0; i < K; ++i) {
      md.add_constraint(fmt::format("len_{}_{}_a", e, i), "evenness", {{z[a][i], 1.0}, {z[c][i], -1.0}, {len, -1.0}},
                        Sense::le, 0.0);
      md.add_constraint(fmt::format("len_{}_{}_b", e, i), "evenness", {{z[c][i], 1.0}, {z[a][i], -1.0}, {len, -1.0}},
                        Sense::le, 0.0);
    }
    md.add_constraint(fmt::format("dev_{}_a", e), "evenness", {{dev, 1.0}, {len, -1.0}, {avg, 1.0}}, Sense::ge, 0.0);
    md.add_constraint(fmt::format("dev_{}_b", e), "evenness", {{dev, 1.0}, {len, 1.0}, {avg, -1.0}}, Sense::ge, 0.0);
    avg_row.push_back({len, -inv_m});
    md.add_objective(len, cfg.w_ev * inv_m);
    md.add_objective(dev, cfg.w_ev * inv_m);
  }
  if (m) md.add_constraint("len_avg", "evenness", std::move(avg_row), Sense::eq, 0.0);

  // cyclic order of neighbours
  for (std::size_t v = 0; v < n; ++v) {
    const auto nb = g.neighbors(v);
    if (nb.size() < 2) continue;
    std::vector<std::size_t> order(nb.begin(), nb.end());
    std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
      return heading(pos[p] - pos[v]) < heading(pos[q] - pos[v]);
    });
    std::vector<Term> one;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t u1 = order[k], u2 = order[(k + 1) % order.size()];
      const std::size_t exc = md.add_var(fmt::format("exc_{}_{}", v, k), VarKind::binary, 0, 1);
      one.push_back({exc, 1.0});
      md.add_constraint(fmt::format("order_{}_{}", v, k), "order",
                        {{b.sec.at({u1, v}), 1.0}, {b.sec.at({u2, v}), -1.0}, {exc, -2.0 * K}}, Sense::le, -1.0);
    }
    md.add_constraint(fmt::format("order_{}", v), "order", std::move(one), Sense::eq, 1.0);
  }

  // planarity separation
  for (const auto& [e, f] : planarity_pairs) {
    if (e >= m || f >= m || e == f) throw ValidationError("planarity pair references an unknown edge");
    const Edge& ee = g.edge(e);
    const Edge& ff = g.edge(f);
    std::vector<Term> cover;
    for (int j = 0; j < 2 * K; ++j) {
      const std::size_t sep = md.add_var(fmt::format("sep_{}_{}_{}", e, f, j), VarKind::binary, 0, 1);
      cover.push_back({sep, 1.0});
      const int i = j % K;
      const double dir = j < K ? 1.0 : -1.0;
      int k = 0;
      for (std::size_t p : {ff.a, ff.b})
        for (std::size_t q : {ee.a, ee.b})
          md.add_constraint(fmt::format("sep_{}_{}_{}_{}", e, f, j, k++), "planarity",
                            {{z[p][i], dir}, {z[q][i], -dir}, {sep, -M}}, Sense::ge, cfg.d_min - M);
    }
    md.add_constraint(fmt::format("cover_{}_{}", e, f), "planarity", std::move(cover), Sense::ge, 1.0);
  }
  return b;
}

Layout extract_layout(const PowerGraph& g, const Layout& input, const BuiltModel& built,
                      const std::vector<double>& values) {
  const std::vector<Point> pos = positions(g, input);
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Point& p : pos) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const Point center{(x0 + x1) / 2, (y0 + y1) / 2};
  Layout out;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    out.set(g.node(v).id, Point{values.at(built.x[v]), values.at(built.y[v])} + center);
  return out;
}

namespace {

double point_segment_distance(const Point& w, const Point& p, const Point& q) {
  const Point d = q - p;
  const double len2 = dot(d, d);
  const double t = len2 > 0 ? std::clamp(dot(w - p, d) / len2, 0.0, 1.0) : 0.0;
  return distance(w, p + d * t);
}

}  // namespace

std::vector<EdgePair> intersecting_pairs(const PowerGraph& g, const Layout& layout) {
  const std::vector<Point> pos = positions(g, layout);
  double scale = 1.0;
  for (const Point& p : pos) scale = std::max({scale, std::fabs(p.x), std::fabs(p.y)});
  const double eps = kNearPairTolerance * scale;
  std::vector<EdgePair> out;
  const std::size_t m = g.edge_count();
  std::vector<std::array<double, 4>> box(m);
  for (std::size_t e = 0; e < m; ++e) {
    const Point& p = pos[g.edge(e).a];
    const Point& q = pos[g.edge(e).b];
    box[e] = {std::min(p.x, q.x) - eps, std::max(p.x, q.x) + eps, std::min(p.y, q.y) - eps, std::max(p.y, q.y) + eps};
  }
  for (std::size_t e = 0; e < m; ++e)
    for (std::size_t f = e + 1; f < m; ++f) {
      const Edge& a = g.edge(e);
      const Edge& b = g.edge(f);
      if (a.touches(b.a) || a.touches(b.b)) continue;
      if (box[e][1] < box[f][0] || box[f][1] < box[e][0] || box[e][3] < box[f][2] || box[f][3] < box[e][2]) continue;
      const Point &p1 = pos[a.a], &q1 = pos[a.b], &p2 = pos[b.a], &q2 = pos[b.b];
      const bool near = point_segment_distance(p1, p2, q2) <= eps || point_segment_distance(q1, p2, q2) <= eps ||
                        point_segment_distance(p2, p1, q1) <= eps || point_segment_distance(q2, p1, q1) <= eps;
      if (near || geom::segments_intersect(Segment{p1, q1}, Segment{p2, q2})) out.push_back({e, f});
    }
  return out;
}

nlohmann::json PlanResult::log_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const RoundLog& r : rounds)
    rows.push_back({{"round", r.round},
                    {"vars", r.vars},
                    {"rows", r.rows},
                    {"incumbents", r.objective},
                    {"bound", r.bound},
                    {"gap", r.gap},
                    {"seconds", r.seconds},
                    {"status", r.status},
                    {"constrained_pairs", r.constrained_pairs},
                    {"new_pairs", r.new_pairs},
                    {"component", r.component}});
  return {{"planar", planar}, {"rounds", std::move(rows)}};
}

PlanResult iterative_plan(const PowerGraph& g, const Layout& layout, const PlannerConfig& cfg, SolverBackend& backend) {
  cfg.validate(&g);
  const SectorMap sigma = derive_sectors(g, layout, cfg.K);
  std::set<EdgePair> pairs;
  PlanResult result;
  result.layout = layout;
  for (int round = 1; round <= cfg.max_rounds; ++round) {
    BuiltModel built = build_model(g, layout, sigma, cfg, pairs);
    SolveResult res = solve(built.model, backend, cfg.solve_options());
    RoundLog log;
    log.round = round;
    log.vars = built.model.var_count();
    log.rows = built.model.row_count();
    log.status = std::string(to_string(res.status));
    log.seconds = res.seconds;
    log.constrained_pairs = pairs.size();
    if (!has_solution(res.status)) {
      std::string groups;
      for (const auto& [name, count] : built.model.group_sizes()) groups += fmt::format(" {}={}", name, count);
      const std::string msg = fmt::format("layout model round {} ended {} ({} vars, {} rows; groups:{}): {}", round,
                                          log.status, log.vars, log.rows, groups, res.message);
      if (res.status == SolveStatus::infeasible) throw InfeasibleError(msg);
      if (res.status == SolveStatus::timeout) throw TimeoutError(msg);
      throw Error(msg);
    }
    log.objective = res.objective;
    log.bound = res.bound;
    log.gap = res.gap;
    result.layout = extract_layout(g, layout, built, res.values);
    const std::vector<EdgePair> found = intersecting_pairs(g, result.layout);
    std::size_t fresh = 0;
    for (const EdgePair& p : found) fresh += pairs.insert(p).second ? 1 : 0;
    log.new_pairs = fresh;
    result.rounds.push_back(log);
    if (found.empty()) {
      result.planar = true;
      break;
    }
    if (fresh == 0) break;
  }
  return result;
}

namespace {

std::vector<std::vector<std::size_t>> connected_components(const PowerGraph& g) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<char> seen(g.node_count(), 0);
  for (std::size_t s = 0; s < g.node_count(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (std::size_t w : g.neighbors(comp[i]))
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

Point centroid(const std::vector<Point>& ps) {
  Point c{0, 0};
  for (const Point& p : ps) c = c + p;
  return ps.empty() ? c : c * (1.0 / static_cast<double>(ps.size()));
}

}  // namespace

PlanResult plan_by_component(const PowerGraph& g, const Layout& layout, const PlannerConfig& cfg,
                             SolverBackend& backend) {
  const auto comps = connected_components(g);
  if (comps.size() <= 1) return iterative_plan(g, layout, cfg, backend);
  cfg.validate(&g);

  struct Piece {
    std::vector<std::size_t> nodes;
    std::vector<Point> in, out;
  };
  std::vector<Piece> pieces;
  PlanResult result;
  result.planar = true;
  double len_in = 0.0, len_out = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    Piece pc;
    pc.nodes = comps[c];
    PowerGraph sub;
    Layout sub_layout;
    std::vector<std::size_t> local(g.node_count(), kNone);
    for (std::size_t v : pc.nodes) {
      const Node& nd = g.node(v);
      local[v] = sub.add_node(nd.id, nd.kind, nd.label);
      sub_layout.set(nd.id, layout.at(nd.id));
      pc.in.push_back(layout.at(nd.id));
    }
    for (const Edge& e : g.edges())
      if (local[e.a] != kNone) sub.add_edge(local[e.a], local[e.b], e.count);
    if (sub.edge_count() == 0) {
      pc.out = pc.in;
    } else {
      PlanResult r = iterative_plan(sub, sub_layout, cfg, backend);
      for (RoundLog& log : r.rounds) {
        log.component = c;
        result.rounds.push_back(log);
      }
      result.planar = result.planar && r.planar;
      for (std::size_t v : pc.nodes) pc.out.push_back(r.layout.at(g.node(v).id));
      for (const Edge& e : sub.edges()) {
        len_in += distance(pc.in[e.a], pc.in[e.b]);
        len_out += distance(pc.out[e.a], pc.out[e.b]);
      }
    }
    pieces.push_back(std::move(pc));
  }
  const double scale = len_in > 0 && len_out > 0 ? len_out / len_in : 1.0;
  result.layout = Layout{};
  for (const Piece& pc : pieces) {
    const Point shift = centroid(pc.in) * scale - centroid(pc.out);
    for (std::size_t i = 0; i < pc.nodes.size(); ++i)
      result.layout.set(g.node(pc.nodes[i]).id, pc.nodes.size() == 1 ? pc.in[i] * scale : pc.out[i] + shift);
  }
  if (result.planar) result.planar = intersecting_pairs(g, result.layout).empty();
  return result;
}

}  // namespace topo::milp
