#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpusmix/document.hpp"
#include "corpusmix/graph.hpp"
#include "corpusmix/tokenizer.hpp"

namespace corpusmix {

struct SizeRange {
  std::size_t min = 2;
  std::size_t max = 8;

  // Throws invalid_range unless 2 <= min <= max.
  void validate() const;
};

struct Cluster {
  std::vector<std::size_t> nodes;  // ascending
  std::string key;
  std::size_t ordinal = 0;  // pick order within the component
  std::size_t distinct_sources = 0;
  std::size_t total_tokens = 0;
};

struct Selection {
  std::vector<Cluster> clusters;    // component-key order, then pick order
  std::vector<std::size_t> leftovers;  // component remnants below min plus keyless nodes, ascending
};

// Remaining sets at or below this size are searched exhaustively.
inline constexpr std::size_t kExactSelectionLimit = 20;

// Repeatedly picks, per component, the cluster with the most distinct sources,
// then the most tokens, then the lexicographically smallest node list, and
// removes it. Remaining sets above kExactSelectionLimit use a greedy pick:
// the heaviest node of each uncovered source, then the heaviest nodes overall.
Selection select_clusters(const DataGraph& graph, const SizeRange& range, std::size_t workers = 1);

// One pick over an explicit node set; exposed for testing.
Cluster pick_cluster(const DataGraph& graph, std::span<const std::size_t> remaining, const SizeRange& range);

enum class DomainTag { domain, general };

std::string_view to_string(DomainTag tag) noexcept;

struct ProvenanceEntry {
  std::string source;
  std::optional<std::string> entity_key;
  std::size_t node_ref = 0;

  friend bool operator==(const ProvenanceEntry&, const ProvenanceEntry&) = default;
};

struct TrainingSample {
  std::string text;
  std::vector<ProvenanceEntry> provenance;
  std::size_t token_count = 0;
  DomainTag tag = DomainTag::domain;
  Language language = Language::other;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

inline constexpr std::string_view kDefaultSeparator = "\n\n";

// Shuffles the cluster's nodes with a generator keyed on (seed, key, ordinal)
// and joins their texts. `docs` is indexed by node id. A one-node cluster is
// the leftover path and yields the node text unchanged.
TrainingSample synthesize_sample(const Cluster& cluster, std::span<const Document> docs, std::uint64_t seed,
                                 std::string_view separator, const Tokenizer& tokenizer);

struct MixOptions {
  SizeRange range;
  std::uint64_t seed = 0;
  std::string separator = std::string(kDefaultSeparator);
};

struct MixResult {
  std::vector<TrainingSample> samples;  // clusters first, then leftovers as singletons
  std::map<std::size_t, std::size_t> cluster_size_histogram;
  std::size_t cluster_count = 0;
  std::size_t leftover_count = 0;
};

// build_graph + select_clusters + synthesize_sample over a whole document set.
MixResult mix_documents(std::span<const Document> docs, const MixOptions& options, const Tokenizer& tokenizer,
                        std::size_t workers = 1);

}  // namespace corpusmix
