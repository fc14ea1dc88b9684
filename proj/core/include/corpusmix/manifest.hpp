#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "corpusmix/ingest.hpp"
#include "corpusmix/interleave.hpp"
#include "corpusmix/mixer.hpp"
#include "corpusmix/pack.hpp"
#include "corpusmix/quality.hpp"

namespace corpusmix {

struct SourceInput {
  SourceSchema schema;
  std::filesystem::path path;
};

// Full pipeline configuration, read from a YAML file. Relative paths resolve
// against the manifest's directory.
struct MixManifest {
  std::vector<SourceInput> sources;
  FilterPolicy filter;
  DedupParams dedup;
  bool near_dedup = true;
  SizeRange clusters;
  std::string separator = std::string(kDefaultSeparator);
  RatioSpec ratio;
  std::size_t sequence_length = kDefaultSequenceLength;
  PackPolicy pack_policy = PackPolicy::split_across;
  std::size_t sequences_per_shard = 1024;
  std::string tokenizer = "byte";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::filesystem::path output_dir = "out";

  // Throws invalid_config on bad values or missing input files.
  void validate() const;
};

// Overrides are "dotted.key=value" strings applied before parsing, e.g.
// "pack.sequence_length=512" or "workers=8".
MixManifest load_manifest(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
MixManifest parse_manifest(std::string_view yaml, const std::filesystem::path& base_dir,
                           const std::vector<std::string>& overrides = {});

// Defaults with overrides applied; for stage subcommands run without a manifest.
MixManifest default_manifest(const std::vector<std::string>& overrides = {});

}  // namespace corpusmix
