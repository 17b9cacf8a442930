#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "topo/edits.hpp"
#include "topo/graph.hpp"

namespace topo {

// Reads the JSON grid format. Throws ParseError (with line) on malformed
// text and ValidationError on schema or content problems.
GraphLayout load_graph(std::istream& in);
GraphLayout load_graph_text(std::string_view text);
GraphLayout load_graph_file(const std::filesystem::path& path);

// Node array with coordinates plus "kind" for auxiliary nodes; loadable again.
nlohmann::json layout_json(const PowerGraph& g, const Layout& layout);
std::string dump_layout(const PowerGraph& g, const Layout& layout);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace topo
