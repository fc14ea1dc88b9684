#include "corpusmix/mixer.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <unordered_map>

#include "corpusmix/error.hpp"
#include "corpusmix/hashing.hpp"
#include "corpusmix/parallel.hpp"

namespace corpusmix {

void SizeRange::validate() const {
  if (min < 2 || max < min) {
    throw Error(Errc::invalid_range,
                "cluster size range [" + std::to_string(min) + ", " + std::to_string(max) + "] requires 2 <= min <= max");
  }
}

std::string_view to_string(DomainTag tag) noexcept { return tag == DomainTag::domain ? "domain" : "general"; }

namespace {

struct Candidate {
  std::size_t distinct = 0;
  std::size_t tokens = 0;
  std::vector<std::size_t> nodes;
};

bool better(std::size_t distinct, std::size_t tokens, const std::vector<std::size_t>& nodes, const Candidate& best) {
  if (distinct != best.distinct) return distinct > best.distinct;
  if (tokens != best.tokens) return tokens > best.tokens;
  return std::lexicographical_compare(nodes.begin(), nodes.end(), best.nodes.begin(), best.nodes.end());
}

// Depth-first enumeration of ascending index lists visits them in
// lexicographic order.
class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const DataGraph& graph, std::span<const std::size_t> remaining, const SizeRange& range)
      : remaining_(remaining), range_(range) {
    std::unordered_map<std::string_view, int> source_bits;
    for (std::size_t n : remaining) {
      const auto [it, inserted] = source_bits.try_emplace(graph.nodes[n].source, static_cast<int>(source_bits.size()));
      source_bit_.push_back(std::uint64_t{1} << it->second);
      tokens_.push_back(graph.nodes[n].token_count);
    }
  }

  Candidate run() {
    best_ = Candidate{};
    have_best_ = false;
    current_.clear();
    visit(0, 0, 0);
    return best_;
  }

 private:
  void visit(std::size_t start, std::uint64_t mask, std::size_t tokens) {
    if (current_.size() >= range_.min) {
      const auto distinct = static_cast<std::size_t>(std::popcount(mask));
      if (!have_best_ || better(distinct, tokens, current_, best_)) {
        best_.distinct = distinct;
        best_.tokens = tokens;
        best_.nodes = current_;
        have_best_ = true;
      }
    }
    if (current_.size() == range_.max) return;
    for (std::size_t i = start; i < remaining_.size(); ++i) {
      // not enough nodes left to reach min
      if (current_.size() + (remaining_.size() - i) < range_.min) break;
      current_.push_back(remaining_[i]);
      visit(i + 1, mask | source_bit_[i], tokens + tokens_[i]);
      current_.pop_back();
    }
  }

  std::span<const std::size_t> remaining_;
  SizeRange range_;
  std::vector<std::uint64_t> source_bit_;
  std::vector<std::size_t> tokens_;
  std::vector<std::size_t> current_;
  Candidate best_;
  bool have_best_ = false;
};

Candidate greedy_pick(const DataGraph& graph, std::span<const std::size_t> remaining, const SizeRange& range) {
  std::vector<std::size_t> order(remaining.begin(), remaining.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (graph.nodes[a].token_count != graph.nodes[b].token_count) {
      return graph.nodes[a].token_count > graph.nodes[b].token_count;
    }
    return a < b;
  });
  std::vector<bool> taken(order.size(), false);
  std::set<std::string_view> covered;
  Candidate c;
  for (std::size_t i = 0; i < order.size() && c.nodes.size() < range.max; ++i) {
    const std::string_view src = graph.nodes[order[i]].source;
    if (covered.insert(src).second) {
      taken[i] = true;
      c.nodes.push_back(order[i]);
    }
  }
  for (std::size_t i = 0; i < order.size() && c.nodes.size() < range.max; ++i) {
    if (!taken[i]) {
      taken[i] = true;
      c.nodes.push_back(order[i]);
    }
  }
  std::sort(c.nodes.begin(), c.nodes.end());
  c.distinct = std::min(covered.size(), c.nodes.size());
  for (std::size_t n : c.nodes) c.tokens += graph.nodes[n].token_count;
  return c;
}

}  // namespace

Cluster pick_cluster(const DataGraph& graph, std::span<const std::size_t> remaining, const SizeRange& range) {
  range.validate();
  if (remaining.size() < range.min) throw Error(Errc::invalid_argument, "pick_cluster: fewer nodes than min size");
  Candidate best = remaining.size() <= kExactSelectionLimit ? ExhaustiveSearch(graph, remaining, range).run()
                                                            : greedy_pick(graph, remaining, range);
  Cluster c;
  c.nodes = std::move(best.nodes);
  c.distinct_sources = best.distinct;
  c.total_tokens = best.tokens;
  return c;
}

Selection select_clusters(const DataGraph& graph, const SizeRange& range, std::size_t workers) {
  range.validate();

  struct PerComponent {
    std::vector<Cluster> clusters;
    std::vector<std::size_t> leftovers;
  };
  std::vector<PerComponent> results(graph.components.size());
  parallel_for(graph.components.size(), workers, [&](std::size_t ci) {
    const Component& comp = graph.components[ci];
    std::vector<std::size_t> remaining = comp.nodes;
    std::size_t ordinal = 0;
    while (remaining.size() >= range.min) {
      Cluster c = pick_cluster(graph, remaining, range);
      c.key = comp.key;
      c.ordinal = ordinal++;
      std::vector<std::size_t> rest;
      rest.reserve(remaining.size() - c.nodes.size());
      std::set_difference(remaining.begin(), remaining.end(), c.nodes.begin(), c.nodes.end(),
                          std::back_inserter(rest));
      remaining = std::move(rest);
      results[ci].clusters.push_back(std::move(c));
    }
    results[ci].leftovers = std::move(remaining);
  });

  Selection sel;
  for (PerComponent& r : results) {
    for (Cluster& c : r.clusters) sel.clusters.push_back(std::move(c));
    sel.leftovers.insert(sel.leftovers.end(), r.leftovers.begin(), r.leftovers.end());
  }
  sel.leftovers.insert(sel.leftovers.end(), graph.keyless.begin(), graph.keyless.end());
  std::sort(sel.leftovers.begin(), sel.leftovers.end());
  return sel;
}

TrainingSample synthesize_sample(const Cluster& cluster, std::span<const Document> docs, std::uint64_t seed,
                                 std::string_view separator, const Tokenizer& tokenizer) {
  if (cluster.nodes.empty()) throw Error(Errc::invalid_argument, "synthesize_sample: empty cluster");
  std::vector<std::size_t> order = cluster.nodes;
  Rng rng(derive_seed(seed, cluster.key, cluster.ordinal));
  rng.shuffle(std::span<std::size_t>(order));

  TrainingSample s;
  bool all_general = true;
  std::size_t lang_votes[3] = {0, 0, 0};
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Document& d = docs[order[k]];
    if (d.text.empty()) throw Error(Errc::invalid_argument, "synthesize_sample: empty node text");
    if (k > 0) {
      s.text.append(separator);
      s.token_count += tokenizer.count(separator);
    }
    s.text.append(d.text);
    s.token_count += d.token_count;
    s.provenance.push_back(ProvenanceEntry{d.source, d.entity_key, order[k]});
    all_general = all_general && is_general_source(d.source);
    ++lang_votes[static_cast<int>(d.language)];
  }
  s.tag = all_general ? DomainTag::general : DomainTag::domain;
  s.language = static_cast<Language>(std::max_element(std::begin(lang_votes), std::end(lang_votes)) -
                                     std::begin(lang_votes));
  return s;
}

MixResult mix_documents(std::span<const Document> docs, const MixOptions& options, const Tokenizer& tokenizer,
                        std::size_t workers) {
  options.range.validate();
  const DataGraph graph = build_graph(docs);
  const Selection sel = select_clusters(graph, options.range, workers);

  MixResult out;
  out.samples.resize(sel.clusters.size() + sel.leftovers.size());
  parallel_for(sel.clusters.size(), workers, [&](std::size_t i) {
    out.samples[i] = synthesize_sample(sel.clusters[i], docs, options.seed, options.separator, tokenizer);
  });
  for (std::size_t i = 0; i < sel.leftovers.size(); ++i) {
    const std::size_t node = sel.leftovers[i];
    Cluster single;
    single.nodes = {node};
    single.key = docs[node].entity_key.value_or("");
    out.samples[sel.clusters.size() + i] =
        synthesize_sample(single, docs, options.seed, options.separator, tokenizer);
  }
  for (const Cluster& c : sel.clusters) ++out.cluster_size_histogram[c.nodes.size()];
  out.cluster_count = sel.clusters.size();
  out.leftover_count = sel.leftovers.size();
  return out;
}

}  // namespace corpusmix
