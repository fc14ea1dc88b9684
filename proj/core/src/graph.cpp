#include "corpusmix/graph.hpp"


namespace corpusmix {

DataGraph build_graph(std::span<const Document> docs) {
  DataGraph g;
  g.nodes.reserve(docs.size());
  std::map<std::string, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const Document& d = docs[i];
    g.nodes.push_back(GraphNode{i, d.source, d.entity_key, d.token_count});
    if (d.entity_key) {
      by_key[*d.entity_key].push_back(i);
    } else {
      g.keyless.push_back(i);
    }
  }
  g.components.reserve(by_key.size());
  for (auto& [key, nodes] : by_key) g.components.push_back(Component{key, std::move(nodes)});
  return g;
}

std::vector<ComponentSummary> connected_components(const DataGraph& graph) {
  std::vector<ComponentSummary> out;
  out.reserve(graph.components.size());
  for (const Component& c : graph.components) {
    ComponentSummary s;
    s.key = c.key;
    s.nodes = c.nodes;
    for (std::size_t n : c.nodes) {
      ++s.source_histogram[graph.nodes[n].source];
      s.total_tokens += graph.nodes[n].token_count;
    }
    s.distinct_sources = s.source_histogram.size();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace corpusmix
