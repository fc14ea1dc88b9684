#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "corpusmix/eval.hpp"
#include "corpusmix/graph.hpp"
#include "corpusmix/hashing.hpp"
#include "corpusmix/mixer.hpp"
#include "corpusmix/pack.hpp"
#include "corpusmix/quality.hpp"

using namespace corpusmix;

namespace {

std::string random_text(Rng& rng, std::size_t words) {
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    const auto len = 2 + rng.below(7);
    for (std::uint64_t j = 0; j < len; ++j) out += static_cast<char>('a' + rng.below(26));
  }
  return out;
}

Document make_doc(std::string text, std::string source, std::optional<std::string> key = std::nullopt) {
  Document d;
  d.token_count = text.size();
  d.text = std::move(text);
  d.source = std::move(source);
  d.language = Language::en;
  d.entity_key = std::move(key);
  return d;
}

void BM_NearDedup(benchmark::State& state) {
  Rng rng(1);
  std::vector<Document> docs;
  for (int i = 0; i < state.range(0); ++i) docs.push_back(make_doc(random_text(rng, 150), "general_web"));
  for (auto _ : state) benchmark::DoNotOptimize(near_dedup(docs, DedupParams{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NearDedup)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SelectClusters(benchmark::State& state) {
  Rng rng(2);
  std::vector<Document> docs;
  for (int c = 0; c < 100; ++c) {
    for (int i = 0; i < state.range(0); ++i) {
      docs.push_back(make_doc(random_text(rng, 5), "S" + std::to_string(rng.below(5)), "K" + std::to_string(c)));
    }
  }
  const DataGraph g = build_graph(docs);
  for (auto _ : state) benchmark::DoNotOptimize(select_clusters(g, SizeRange{2, 8}));
}
BENCHMARK(BM_SelectClusters)->Arg(8)->Arg(20)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RougeL(benchmark::State& state) {
  Rng rng(3);
  const std::string a = random_text(rng, state.range(0));
  const std::string b = random_text(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(score_rouge_l(a, b, RougeUnit::token));
}
BENCHMARK(BM_RougeL)->Arg(50)->Arg(500);

void BM_Pack(benchmark::State& state) {
  Rng rng(4);
  const ByteTokenizer tok;
  std::vector<std::vector<TokenId>> docs;
  for (int i = 0; i < 1000; ++i) docs.push_back(tok.encode(random_text(rng, 1 + rng.below(400))));
  for (auto _ : state) benchmark::DoNotOptimize(pack_sequences(docs, 2048, PackPolicy::split_across, tok));
}
BENCHMARK(BM_Pack)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
