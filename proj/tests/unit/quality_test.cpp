#include <gtest/gtest.h>

#include <cctype>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "corpusmix/error.hpp"
#include "corpusmix/quality.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace corpusmix;
using synth::make_doc;

namespace {

std::vector<Document> gather_docs(const std::vector<Document>& docs, const std::vector<std::size_t>& idx) {
  return gather<Document>(docs, idx);
}

// Replaces word `at` of a space-joined text.
std::string change_word(const std::string& text, std::size_t at, const std::string& replacement) {
  auto words = oracle::split_spaces(text);
  words[at] = replacement;
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) out += (i ? " " : "") + words[i];
  return out;
}

}  // namespace

TEST(QualityFilter, TooShort) {
  FilterPolicy policy;
  policy.min_chars = 10;
  EXPECT_EQ(apply_quality_filter(make_doc("abc", "review"), policy), FilterRule::too_short);
}

TEST(QualityFilter, TooLong) {
  FilterPolicy policy;
  policy.max_chars = 50;
  Rng rng(1);
  EXPECT_EQ(apply_quality_filter(make_doc(synth::random_sentence(rng, 40), "review"), policy), FilterRule::too_long);
}

TEST(QualityFilter, NormalProseKept) {
  Rng rng(2);
  EXPECT_EQ(apply_quality_filter(make_doc(synth::random_sentence(rng, 200), "general_web"), FilterPolicy{}),
            std::nullopt);
}

TEST(QualityFilter, SymbolRatioByDirectCount) {
  std::string text;
  const std::string punct = "!?.,;:#%";
  for (int i = 0; i < 40; ++i) text += (i % 5 < 3) ? punct[static_cast<std::size_t>(i) % punct.size()] : 'a' + i % 26;
  std::size_t p = 0;
  for (unsigned char c : text) p += std::ispunct(c) ? 1 : 0;
  ASSERT_DOUBLE_EQ(static_cast<double>(p) / static_cast<double>(text.size()), 0.6);
  EXPECT_EQ(apply_quality_filter(make_doc(text, "general_web"), FilterPolicy{}), FilterRule::symbol_ratio);
}

TEST(QualityFilter, LowDiversity) {
  EXPECT_EQ(apply_quality_filter(make_doc(std::string(300, 'a'), "general_web"), FilterPolicy{}),
            FilterRule::low_diversity);
}

TEST(QualityFilter, PolicyValidation) {
  FilterPolicy bad;
  bad.min_chars = 100;
  bad.max_chars = 10;
  EXPECT_THROW(bad.validate(), Error);
  FilterPolicy ratio;
  ratio.max_symbol_ratio = 1.5;
  EXPECT_THROW(ratio.validate(), Error);
}

TEST(QualityFilter, OutcomePartitionsInput) {
  std::vector<Document> docs = {make_doc("short", "review"), make_doc("a perfectly ordinary review text", "review"),
                                make_doc(std::string(200, '!'), "review")};
  auto out = filter_documents(docs, FilterPolicy{}, 2);
  EXPECT_EQ(out.kept, (std::vector<std::size_t>{1}));
  ASSERT_EQ(out.dropped.size(), 2u);
  EXPECT_EQ(out.dropped[0].rule, FilterRule::too_short);
  EXPECT_EQ(out.dropped[1].rule, FilterRule::symbol_ratio);
}

TEST(ExactDedup, KeepsFirstOccurrence) {
  std::vector<Document> docs = {make_doc("A", "r"), make_doc("B", "r"), make_doc("A", "r")};
  auto out = exact_dedup(docs);
  EXPECT_EQ(out.kept, (std::vector<std::size_t>{0, 1}));
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].doc_ref, 2u);
  EXPECT_EQ(out.dropped[0].duplicate_of, 0u);
}

TEST(ExactDedup, DistinctUnchanged) {
  std::vector<Document> docs = {make_doc("x", "r"), make_doc("y", "r"), make_doc("z", "r")};
  EXPECT_EQ(exact_dedup(docs).kept, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ExactDedup, PlantedDuplicatesMatchSetOracle) {
  Rng rng(11);
  std::vector<Document> docs;
  for (int i = 0; i < 9000; ++i) docs.push_back(make_doc("doc " + std::to_string(i) + " " + synth::random_word(rng), "r"));
  for (int i = 0; i < 1000; ++i) {
    const auto src = rng.below(docs.size());
    const auto at = rng.below(docs.size() + 1);
    docs.insert(docs.begin() + static_cast<long>(at), docs[src]);
  }
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (seen.insert(docs[i].text).second) expected.push_back(i);
  }
  auto out = exact_dedup(docs);
  EXPECT_EQ(out.kept.size(), 9000u);
  EXPECT_EQ(out.kept, expected);
  auto again = exact_dedup(gather_docs(docs, out.kept));
  EXPECT_TRUE(again.dropped.empty());
}

TEST(Shingles, MatchSetOracleCardinalityAndJaccard) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::string a = synth::random_sentence(rng, 30 + rng.below(40));
    const std::string b = change_word(a, rng.below(30), "zzzzzz");
    const auto ha = shingle_hashes(a, 5);
    const auto hb = shingle_hashes(b, 5);
    const auto sa = oracle::word_shingles(a, 5);
    const auto sb = oracle::word_shingles(b, 5);
    EXPECT_EQ(ha.size(), sa.size());
    EXPECT_NEAR(jaccard(ha, hb), oracle::jaccard(sa, sb), 1e-12);
  }
  EXPECT_TRUE(shingle_hashes("one two three", 5).empty());
}

TEST(NearDedup, OneWordChangeDropsSecond) {
  Rng rng(9);
  const std::string a = synth::random_sentence(rng, 200);
  const std::string b = change_word(a, 100, "qqqqqqq");
  const double j = oracle::jaccard(oracle::word_shingles(a, 5), oracle::word_shingles(b, 5));
  ASSERT_GT(j, 0.94);
  std::vector<Document> docs = {make_doc(a, "r"), make_doc(b, "r")};
  auto out = near_dedup(docs, DedupParams{});
  EXPECT_EQ(out.kept, (std::vector<std::size_t>{0}));
  ASSERT_EQ(out.dropped.size(), 1u);
  EXPECT_EQ(out.dropped[0].duplicate_of, 0u);
  EXPECT_NEAR(out.dropped[0].jaccard, j, 1e-12);
}

TEST(NearDedup, UnrelatedBothKept) {
  Rng rng(10);
  std::vector<Document> docs = {make_doc(synth::random_sentence(rng, 80), "r"),
                                make_doc(synth::random_sentence(rng, 80), "r")};
  EXPECT_EQ(near_dedup(docs, DedupParams{}).kept.size(), 2u);
}

TEST(NearDedup, AgreesWithAllPairsOracle) {
  Rng rng(21);
  std::vector<Document> docs;
  std::vector<std::pair<std::size_t, std::size_t>> planted;
  for (int i = 0; i < 300; ++i) {
    docs.push_back(make_doc(synth::random_sentence(rng, 120), "r"));
    if (i % 3 == 0) {
      planted.emplace_back(docs.size() - 1, docs.size());
      docs.push_back(make_doc(change_word(docs.back().text, 60, "mutated"), "r"));
    }
    if (i % 10 == 0) {
      // borderline pair, well under the threshold
      auto words = oracle::split_spaces(docs.back().text);
      std::string text;
      for (std::size_t w = 0; w < words.size(); ++w) text += (w % 8 == 0 ? std::string("swap") : words[w]) + " ";
      docs.push_back(make_doc(text, "r"));
    }
  }
  std::vector<std::set<std::string>> sh;
  for (const auto& d : docs) sh.push_back(oracle::word_shingles(d.text, 5));

  const DedupParams params;
  auto out = near_dedup(docs, params, 4);
  std::set<std::size_t> dropped;
  for (const auto& d : out.dropped) {
    dropped.insert(d.doc_ref);
    EXPECT_LT(d.duplicate_of, d.doc_ref);
    EXPECT_GE(oracle::jaccard(sh[d.doc_ref], sh[d.duplicate_of]), params.jaccard_threshold);
  }
  std::size_t collapsed = 0;
  for (auto [a, b] : planted) {
    ASSERT_GE(oracle::jaccard(sh[a], sh[b]), 0.9);
    collapsed += dropped.count(b);
  }
  EXPECT_GE(static_cast<double>(collapsed), 0.95 * static_cast<double>(planted.size()));
  EXPECT_TRUE(std::is_sorted(out.kept.begin(), out.kept.end()));
  EXPECT_EQ(out.kept.size() + out.dropped.size(), docs.size());

  auto kept_docs = gather_docs(docs, out.kept);
  EXPECT_TRUE(near_dedup(kept_docs, params).dropped.empty());
  EXPECT_EQ(near_dedup(docs, params, 1).kept, out.kept);
}

TEST(NearDedup, ShortDocsSkipped) {
  std::vector<Document> docs = {make_doc("a b c", "r"), make_doc("a b c", "r")};
  EXPECT_EQ(near_dedup(docs, DedupParams{}).kept.size(), 2u);
}

TEST(DedupParams, BandsTimesRowsMustMatch) {
  DedupParams p;
  p.bands = 10;
  EXPECT_THROW(p.validate(), Error);
}
