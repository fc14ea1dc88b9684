#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpusmix/error.hpp"
#include "corpusmix/mixer.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace corpusmix;
using synth::make_doc;

namespace {

const ByteTokenizer kTok;

std::vector<int> source_ids(const DataGraph& g, std::span<const std::size_t> nodes) {
  std::map<std::string, int> ids;
  std::vector<int> out;
  for (auto n : nodes) out.push_back(ids.emplace(g.nodes[n].source, static_cast<int>(ids.size())).first->second);
  return out;
}

std::vector<std::string> split_on(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t at; (at = s.find(sep, start)) != std::string::npos; start = at + sep.size()) {
    out.push_back(s.substr(start, at - start));
  }
  out.push_back(s.substr(start));
  return out;
}

}  // namespace

TEST(SelectClusters, EmptyGraph) {
  auto sel = select_clusters(build_graph(std::vector<Document>{}), SizeRange{});
  EXPECT_TRUE(sel.clusters.empty());
  EXPECT_TRUE(sel.leftovers.empty());
}

TEST(SelectClusters, FirstPickCoversThreeSources) {
  std::vector<Document> docs = {make_doc("a1", "A", "K"), make_doc("a2", "A", "K"), make_doc("b1", "B", "K"),
                                make_doc("b2", "B", "K"), make_doc("c1", "C", "K")};
  const SizeRange range{2, 3};
  auto g = build_graph(docs);
  auto sel = select_clusters(g, range);
  ASSERT_FALSE(sel.clusters.empty());
  EXPECT_EQ(sel.clusters[0].distinct_sources, 3u);
  EXPECT_EQ(oracle::max_distinct_sources(source_ids(g, g.components[0].nodes), range.min, range.max), 3u);
  EXPECT_EQ(sel.clusters[0].nodes.size(), 3u);
}

TEST(SelectClusters, SingleNodeGoesToLeftovers) {
  std::vector<Document> docs = {make_doc("only", "review", "K")};
  auto sel = select_clusters(build_graph(docs), SizeRange{2, 4});
  EXPECT_TRUE(sel.clusters.empty());
  EXPECT_EQ(sel.leftovers, (std::vector<std::size_t>{0}));
}

TEST(SelectClusters, InvalidRange) {
  auto g = build_graph(std::vector<Document>{});
  try {
    select_clusters(g, SizeRange{3, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_range);
  }
  EXPECT_THROW(select_clusters(g, SizeRange{1, 4}), Error);
}

TEST(SelectClusters, TieBreaksOnTokensThenNodeOrder) {
  std::vector<Document> docs = {make_doc("a", "A", "K"), make_doc("bbbb", "A", "K"), make_doc("cc", "B", "K"),
                                make_doc("dd", "B", "K")};
  auto sel = select_clusters(build_graph(docs), SizeRange{2, 2});
  ASSERT_EQ(sel.clusters.size(), 2u);
  EXPECT_EQ(sel.clusters[0].nodes, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(sel.clusters[1].nodes, (std::vector<std::size_t>{0, 3}));
}

TEST(SelectClusters, OracleOptimalConservedDisjoint) {
  Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Document> docs;
    const auto components = 1 + rng.below(4);
    for (std::uint64_t c = 0; c < components; ++c) {
      const auto size = 1 + rng.below(20);
      const auto nsrc = 3 + rng.below(3);
      for (std::uint64_t i = 0; i < size; ++i) {
        docs.push_back(make_doc(std::string(1 + rng.below(30), 'x'), "S" + std::to_string(rng.below(nsrc)),
                                "K" + std::to_string(c)));
      }
    }
    for (int i = 0; i < 3; ++i) docs.push_back(make_doc("free", "general_web"));
    const std::size_t lo = 2 + rng.below(2);
    const SizeRange range{lo, lo + rng.below(5)};
    auto g = build_graph(docs);
    auto sel = select_clusters(g, range);

    std::map<std::string, std::vector<std::size_t>> remaining;
    for (const auto& c : g.components) remaining[c.key] = c.nodes;
    std::multiset<std::size_t> seen(sel.leftovers.begin(), sel.leftovers.end());
    for (const auto& cl : sel.clusters) {
      auto& rem = remaining[cl.key];
      EXPECT_EQ(cl.distinct_sources, oracle::max_distinct_sources(source_ids(g, rem), range.min, range.max));
      EXPECT_GE(cl.nodes.size(), range.min);
      EXPECT_LE(cl.nodes.size(), range.max);
      std::vector<std::size_t> rest;
      std::set_difference(rem.begin(), rem.end(), cl.nodes.begin(), cl.nodes.end(), std::back_inserter(rest));
      EXPECT_EQ(rest.size() + cl.nodes.size(), rem.size());
      rem = rest;
      seen.insert(cl.nodes.begin(), cl.nodes.end());
    }
    std::multiset<std::size_t> all;
    for (std::size_t i = 0; i < docs.size(); ++i) all.insert(i);
    EXPECT_EQ(seen, all);
  }
}

TEST(SelectClusters, LargeComponentGreedyStillConserves) {
  std::vector<Document> docs;
  for (int i = 0; i < 200; ++i) docs.push_back(make_doc("r" + std::to_string(i), i % 9 ? "review" : "product_info", "HOT"));
  auto sel = select_clusters(build_graph(docs), SizeRange{2, 8});
  std::set<std::size_t> seen(sel.leftovers.begin(), sel.leftovers.end());
  std::size_t count = sel.leftovers.size();
  for (const auto& c : sel.clusters) {
    count += c.nodes.size();
    seen.insert(c.nodes.begin(), c.nodes.end());
  }
  EXPECT_EQ(count, docs.size());
  EXPECT_EQ(seen.size(), docs.size());
  EXPECT_EQ(sel.clusters.front().distinct_sources, 2u);
}

TEST(SelectClusters, WorkerCountIrrelevant) {
  auto docs = synth::product_corpus(5, 60);
  auto g = build_graph(docs);
  auto a = select_clusters(g, SizeRange{2, 4}, 1);
  auto b = select_clusters(g, SizeRange{2, 4}, 8);
  ASSERT_EQ(a.clusters.size(), b.clusters.size());
  for (std::size_t i = 0; i < a.clusters.size(); ++i) EXPECT_EQ(a.clusters[i].nodes, b.clusters[i].nodes);
  EXPECT_EQ(a.leftovers, b.leftovers);
}

TEST(SynthesizeSample, SingleNode) {
  std::vector<Document> docs = {make_doc("hello", "review", "K")};
  Cluster c;
  c.nodes = {0};
  c.key = "K";
  auto s = synthesize_sample(c, docs, 1, kDefaultSeparator, kTok);
  EXPECT_EQ(s.text, "hello");
  EXPECT_EQ(s.provenance.size(), 1u);
  EXPECT_EQ(s.token_count, 5u);
}

TEST(SynthesizeSample, TwoNodesWithSeparator) {
  std::vector<Document> docs = {make_doc("a", "review", "K"), make_doc("b", "product_info", "K")};
  Cluster c;
  c.nodes = {0, 1};
  c.key = "K";
  auto s = synthesize_sample(c, docs, 3, "\n\n", kTok);
  EXPECT_TRUE(s.text == "a\n\nb" || s.text == "b\n\na") << s.text;
  EXPECT_EQ(s.token_count, 1u + 1u + 2u);
  EXPECT_EQ(s.tag, DomainTag::domain);
}

TEST(SynthesizeSample, PermutationsUniform) {
  std::vector<Document> docs = {make_doc("a", "A", "K"), make_doc("b", "B", "K"), make_doc("c", "C", "K")};
  Cluster c;
  c.nodes = {0, 1, 2};
  c.key = "K";
  std::map<std::string, int> counts;
  for (std::uint64_t seed = 0; seed < 6000; ++seed) ++counts[synthesize_sample(c, docs, seed, "|", kTok).text];
  ASSERT_EQ(counts.size(), 6u);
  const double sigma = std::sqrt(6000.0 * (1.0 / 6.0) * (5.0 / 6.0));
  double chi2 = 0;
  for (const auto& [order, n] : counts) {
    EXPECT_LE(std::abs(n - 1000), 3 * sigma) << order;
    chi2 += (n - 1000.0) * (n - 1000.0) / 1000.0;
  }
  // 5 degrees of freedom, p = 0.001
  EXPECT_LT(chi2, 20.515);
}

TEST(SynthesizeSample, SplitRecoversProvenanceTexts) {
  auto docs = synth::product_corpus(9, 40);
  MixOptions opts;
  opts.seed = 77;
  auto mix = mix_documents(docs, opts, kTok);
  for (const auto& s : mix.samples) {
    auto parts = split_on(s.text, opts.separator);
    ASSERT_EQ(parts.size(), s.provenance.size());
    std::size_t tokens = (parts.size() - 1) * opts.separator.size();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      EXPECT_EQ(parts[i], docs[s.provenance[i].node_ref].text);
      tokens += docs[s.provenance[i].node_ref].token_count;
    }
    EXPECT_EQ(s.token_count, tokens);
  }
}

TEST(MixDocuments, DeterministicAndConserving) {
  auto docs = synth::product_corpus(21, 80);
  for (int i = 0; i < 10; ++i) docs.push_back(make_doc("web page " + std::to_string(i), "general_web"));
  MixOptions opts;
  opts.seed = 5;
  auto a = mix_documents(docs, opts, kTok, 1);
  auto b = mix_documents(docs, opts, kTok, 8);
  EXPECT_EQ(a.samples, b.samples);
  std::multiset<std::size_t> refs;
  for (const auto& s : a.samples) {
    for (const auto& p : s.provenance) refs.insert(p.node_ref);
  }
  EXPECT_EQ(refs.size(), docs.size());
  EXPECT_EQ(std::set<std::size_t>(refs.begin(), refs.end()).size(), docs.size());
  EXPECT_EQ(a.samples.size(), a.cluster_count + a.leftover_count);
  std::size_t general = 0;
  for (const auto& s : a.samples) general += s.tag == DomainTag::general;
  EXPECT_EQ(general, 10u);
  opts.seed = 6;
  EXPECT_NE(mix_documents(docs, opts, kTok).samples, a.samples);
}
