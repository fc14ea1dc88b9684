#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpusmix/document.hpp"

namespace corpusmix {

struct GraphNode {
  std::size_t doc_ref = 0;  // index into the document stream
  std::string source;
  std::optional<std::string> entity_key;
  std::size_t token_count = 0;
};

// Records sharing an entity key form a clique; a component is exactly the set
// of nodes with one key.
struct Component {
  std::string key;
  std::vector<std::size_t> nodes;  // ascending node indices
};

// Components are ordered by key, so the graph is independent of input order
// up to node relabeling.
struct DataGraph {
  std::vector<GraphNode> nodes;
  std::vector<Component> components;
  std::vector<std::size_t> keyless;  // ascending
};

DataGraph build_graph(std::span<const Document> docs);

struct ComponentSummary {
  std::string key;
  std::vector<std::size_t> nodes;
  std::map<std::string, std::size_t> source_histogram;
  std::size_t distinct_sources = 0;
  std::size_t total_tokens = 0;
};

std::vector<ComponentSummary> connected_components(const DataGraph& graph);

}  // namespace corpusmix
