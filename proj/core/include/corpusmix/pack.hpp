#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpusmix/tokenizer.hpp"

namespace corpusmix {

inline constexpr std::size_t kDefaultSequenceLength = 2048;
inline constexpr std::size_t kMaxSequenceLength = 65536;  // boundaries are stored as u16

enum class PackPolicy {
  split_across,  // a document crossing the end continues in the next sequence
  drop_tail,     // the overflowing part of a document is discarded
};

std::string_view to_string(PackPolicy p) noexcept;
PackPolicy parse_pack_policy(std::string_view s);

struct PackedSequence {
  std::vector<TokenId> tokens;           // exactly L ids
  std::vector<std::uint16_t> boundaries;  // offsets where a document starts
  std::size_t pad_count = 0;             // trailing pads, final sequence only

  friend bool operator==(const PackedSequence&, const PackedSequence&) = default;
};

struct PackStats {
  std::size_t documents = 0;
  std::size_t skipped_empty = 0;
  std::size_t content_tokens = 0;    // document tokens written
  std::size_t separator_tokens = 0;
  std::size_t pad_tokens = 0;
  std::size_t dropped_tokens = 0;    // drop_tail only
};

// Streaming packer. Documents are joined with one separator id; the final
// sequence is padded on finish().
class SequencePacker {
 public:
  SequencePacker(std::size_t length, PackPolicy policy, TokenId separator, TokenId pad);

  void add(std::span<const TokenId> doc);
  std::vector<PackedSequence> finish();

  // Completed sequences so far, moved out.
  std::vector<PackedSequence> take_completed();

  const PackStats& stats() const { return stats_; }

 private:
  void push(TokenId id);
  void flush();
  std::size_t room() const { return length_ - current_.tokens.size(); }

  std::size_t length_;
  PackPolicy policy_;
  TokenId separator_;
  TokenId pad_;
  bool any_doc_ = false;
  PackedSequence current_;
  std::vector<PackedSequence> completed_;
  PackStats stats_;
};

std::vector<PackedSequence> pack_sequences(std::span<const std::vector<TokenId>> docs, std::size_t length,
                                           PackPolicy policy, const Tokenizer& tokenizer,
                                           PackStats* stats = nullptr);

// Binary shard: "CPKD", u16 version, u32 L, u64 count, then per sequence
// L x u32 ids, u16 boundary count, u16 boundaries. All little-endian.
inline constexpr std::uint16_t kShardVersion = 1;

struct Shard {
  std::uint32_t length = 0;
  std::vector<PackedSequence> sequences;
};

void write_shard(std::ostream& out, const Shard& shard);
// Pad counts are reconstructed from trailing pad ids.
Shard read_shard(std::istream& in, TokenId pad);
void write_shard_file(const std::filesystem::path& path, const Shard& shard);
Shard read_shard_file(const std::filesystem::path& path, TokenId pad);

nlohmann::json shard_sidecar(const Shard& shard, TokenId separator, TokenId pad);

}  // namespace corpusmix
