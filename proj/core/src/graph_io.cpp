#include "mrx/graph_io.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace mrx {

using nlohmann::json;

void write_graph_jsonl(std::ostream& os, const HierGraph& graph) {
  for (const auto& v : graph.vertices()) {
    json rec = {{"id", v.id},
                {"x", v.pos.x},
                {"y", v.pos.y},
                {"layer", v.layer == Layer::Global ? "global" : "local"},
                {"u", v.utility}};
    os << rec.dump() << '\n';
  }
  for (const auto& e : graph.edges()) {
    json rec = {{"a", graph.vertex(e.a).id}, {"b", graph.vertex(e.b).id}, {"length", e.length}};
    os << rec.dump() << '\n';
  }
}

HierGraph read_graph_jsonl(std::istream& is) {
  HierGraph g;
  std::map<VertexId, std::size_t> by_id;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json rec = json::parse(line);
    if (rec.contains("id")) {
      const Layer layer = rec.at("layer").get<std::string>() == "local" ? Layer::Local : Layer::Global;
      const std::size_t idx = g.add_vertex({rec.at("x").get<double>(), rec.at("y").get<double>()},
                                           layer, rec.at("u").get<int>());
      by_id[rec.at("id").get<VertexId>()] = idx;
    } else {
      const auto a = by_id.find(rec.at("a").get<VertexId>());
      const auto b = by_id.find(rec.at("b").get<VertexId>());
      if (a == by_id.end() || b == by_id.end()) {
        throw std::runtime_error("graph dump: edge references unknown vertex");
      }
      g.add_edge(a->second, b->second);
    }
  }
  return g;
}

}  // namespace mrx
