#include "topo/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "topo/error.hpp"

namespace topo {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* name, const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ValidationError(where + ": missing field '" + name + "'");
  return *it;
}

double number(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name, where);
  if (!v.is_number()) throw ValidationError(where + "." + name + ": expected number");
  return v.get<double>();
}

std::string id_text(const json& obj, const char* name, const std::string& where) {
  const json& v = field(obj, name, where);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ValidationError(where + "." + name + ": expected string id");
}

bool reserved(const std::string& id) {
  return id.rfind(kDummyPrefix, 0) == 0 || id.rfind(kInflectionPrefix, 0) == 0;
}

}  // namespace

GraphLayout load_graph_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("top level: expected object");
  const json& nodes = field(doc, "nodes", "top level");
  if (!nodes.is_array()) throw ValidationError("nodes: expected array");

  GraphLayout out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const json& n = nodes[i];
    if (!n.is_object()) throw ValidationError(where + ": expected object");
    const std::string id = id_text(n, "id", where);
    NodeKind kind = NodeKind::real;
    if (auto k = n.find("kind"); k != n.end()) {
      if (!k->is_string()) throw ValidationError(where + ".kind: expected string");
      auto parsed = node_kind_from_string(k->get<std::string>());
      if (!parsed) throw ValidationError(where + ".kind: unknown kind '" + k->get<std::string>() + "'");
      kind = *parsed;
    }
    if (kind == NodeKind::real && reserved(id)) throw ValidationError(where + ".id: '" + id + "' uses a reserved prefix");
    std::string label;
    if (auto l = n.find("label"); l != n.end() && !l->is_null()) {
      if (!l->is_string()) throw ValidationError(where + ".label: expected string");
      label = l->get<std::string>();
    }
    const Point p{number(n, "x", where), number(n, "y", where)};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError(where + ": non-finite coordinates");
    if (out.graph.find_node(NodeId(id))) throw ValidationError(where + ".id: duplicate id '" + id + "'");
    out.graph.add_node(NodeId(id), kind, std::move(label));
    out.layout.set(NodeId(id), p);
  }

  if (auto edges = doc.find("edges"); edges != doc.end()) {
    if (!edges->is_array()) throw ValidationError("edges: expected array");
    for (std::size_t i = 0; i < edges->size(); ++i) {
      const std::string where = "edges[" + std::to_string(i) + "]";
      const json& e = (*edges)[i];
      if (!e.is_object()) throw ValidationError(where + ": expected object");
      const NodeId a(id_text(e, "a", where));
      const NodeId b(id_text(e, "b", where));
      int count = 1;
      if (auto c = e.find("count"); c != e.end()) {
        if (!c->is_number_integer() || c->get<long long>() < 1)
          throw ValidationError(where + ".count: expected integer >= 1");
        count = c->get<int>();
      }
      auto ia = out.graph.find_node(a);
      auto ib = out.graph.find_node(b);
      if (!ia) throw ValidationError(where + ".a: undeclared node '" + a.str() + "'");
      if (!ib) throw ValidationError(where + ".b: undeclared node '" + b.str() + "'");
      if (*ia == *ib) throw ValidationError(where + ": self-loop at '" + a.str() + "'");
      out.graph.add_edge(*ia, *ib, count);
    }
  }
  out.graph.validate();
  check_distinct_points(out.graph, positions(out.graph, out.layout));
  return out;
}

GraphLayout load_graph(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_graph_text(buf.str());
}

GraphLayout load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path.string() + "'");
  return load_graph(in);
}

nlohmann::json layout_json(const PowerGraph& g, const Layout& layout) {
  json nodes = json::array();
  for (const Node& n : g.nodes()) {
    const Point& p = layout.at(n.id);
    json o = {{"id", n.id.str()}, {"x", p.x}, {"y", p.y}};
    if (!n.label.empty()) o["label"] = n.label;
    if (n.kind != NodeKind::real) o["kind"] = std::string(to_string(n.kind));
    nodes.push_back(std::move(o));
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    json o = {{"a", g.node(e.a).id.str()}, {"b", g.node(e.b).id.str()}};
    if (e.count > 1) o["count"] = e.count;
    edges.push_back(std::move(o));
  }
  return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::string dump_layout(const PowerGraph& g, const Layout& layout) { return layout_json(g, layout).dump(1) + "\n"; }

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace topo
