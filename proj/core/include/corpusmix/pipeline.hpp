#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpusmix/error.hpp"
#include "corpusmix/manifest.hpp"
#include "corpusmix/stats.hpp"

namespace corpusmix {

// An Error raised inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Fixed artifact names inside the output directory.
namespace artifacts {
inline constexpr const char* kDocuments = "documents.jsonl";
inline constexpr const char* kIngestErrors = "ingest_errors.jsonl";
inline constexpr const char* kFiltered = "filtered.jsonl";
inline constexpr const char* kFilterDrops = "filter_drops.jsonl";
inline constexpr const char* kDeduped = "deduped.jsonl";
inline constexpr const char* kDedupDrops = "dedup_drops.jsonl";
inline constexpr const char* kGraph = "graph.jsonl";
inline constexpr const char* kSamples = "samples.jsonl";
inline constexpr const char* kMixed = "mixed.jsonl";
inline constexpr const char* kMixReport = "mix_report.json";
inline constexpr const char* kShardDir = "shards";
inline constexpr const char* kStats = "stats.json";
inline constexpr const char* kIncomplete = "INCOMPLETE";
}  // namespace artifacts

// Each stage reads and writes materialized files, so running the stages one
// by one equals run_pipeline. The returned JSON is the stage's stats entry.

nlohmann::json run_ingest(const std::vector<SourceInput>& sources, const std::filesystem::path& out_docs,
                          const std::filesystem::path& out_errors, const Tokenizer& tokenizer, std::size_t workers);

nlohmann::json run_filter(const std::filesystem::path& in, const std::filesystem::path& out,
                          const std::filesystem::path& drops, const FilterPolicy& policy, const Tokenizer& tokenizer,
                          std::size_t workers);

nlohmann::json run_dedup(const std::filesystem::path& in, const std::filesystem::path& out,
                         const std::filesystem::path& drops, const DedupParams& params, bool near,
                         const Tokenizer& tokenizer, std::size_t workers);

// JSONL {key, node_refs, sources, total_tokens} per component.
nlohmann::json run_graph(const std::filesystem::path& in, const std::filesystem::path& out,
                         const Tokenizer& tokenizer);

nlohmann::json run_mix(const std::filesystem::path& in, const std::filesystem::path& out, const MixOptions& options,
                       const Tokenizer& tokenizer, std::size_t workers);

nlohmann::json run_interleave(const std::filesystem::path& in, const std::filesystem::path& out,
                              const std::filesystem::path& report, const RatioSpec& ratio, std::uint64_t seed);

nlohmann::json run_pack(const std::filesystem::path& in, const std::filesystem::path& shard_dir,
                        std::size_t sequence_length, PackPolicy policy, std::size_t sequences_per_shard,
                        const Tokenizer& tokenizer);

// Shard files in a directory, sorted by name.
std::vector<std::filesystem::path> list_shards(const std::filesystem::path& shard_dir);

// Executes every stage and writes stats.json. On failure an INCOMPLETE marker
// naming the stage is left in the output directory and a StageError is thrown.
nlohmann::json run_pipeline(const MixManifest& manifest);

}  // namespace corpusmix
