#include "corpusmix/pack.hpp"

#include <array>
#include <fstream>

#include "corpusmix/error.hpp"

namespace corpusmix {

std::string_view to_string(PackPolicy p) noexcept {
  return p == PackPolicy::split_across ? "split_across" : "drop_tail";
}

PackPolicy parse_pack_policy(std::string_view s) {
  if (s == "split_across") return PackPolicy::split_across;
  if (s == "drop_tail") return PackPolicy::drop_tail;
  throw Error(Errc::invalid_config, "unknown pack policy '" + std::string(s) + "'");
}

SequencePacker::SequencePacker(std::size_t length, PackPolicy policy, TokenId separator, TokenId pad)
    : length_(length), policy_(policy), separator_(separator), pad_(pad) {
  if (length < 2 || length > kMaxSequenceLength) {
    throw Error(Errc::invalid_config, "sequence length must lie in [2, 65536]");
  }
  current_.tokens.reserve(length_);
}

void SequencePacker::push(TokenId id) {
  current_.tokens.push_back(id);
  if (current_.tokens.size() == length_) flush();
}

void SequencePacker::flush() {
  completed_.push_back(std::move(current_));
  current_ = PackedSequence{};
  current_.tokens.reserve(length_);
}

void SequencePacker::add(std::span<const TokenId> doc) {
  if (doc.empty()) {
    ++stats_.skipped_empty;
    return;
  }
  ++stats_.documents;
  if (policy_ == PackPolicy::split_across) {
    if (any_doc_) {
      push(separator_);
      ++stats_.separator_tokens;
    }
    any_doc_ = true;
    current_.boundaries.push_back(static_cast<std::uint16_t>(current_.tokens.size()));
    for (TokenId id : doc) push(id);
    stats_.content_tokens += doc.size();
    return;
  }

  // drop_tail: documents never continue into the next sequence
  if (!current_.tokens.empty()) {
    push(separator_);
    ++stats_.separator_tokens;
  }
  current_.boundaries.push_back(static_cast<std::uint16_t>(current_.tokens.size()));
  const std::size_t take = std::min(doc.size(), room());
  for (std::size_t i = 0; i < take; ++i) push(doc[i]);
  stats_.content_tokens += take;
  stats_.dropped_tokens += doc.size() - take;
}

std::vector<PackedSequence> SequencePacker::take_completed() {
  std::vector<PackedSequence> out = std::move(completed_);
  completed_.clear();
  return out;
}

std::vector<PackedSequence> SequencePacker::finish() {
  if (!current_.tokens.empty()) {
    current_.pad_count = room();
    stats_.pad_tokens += current_.pad_count;
    current_.tokens.resize(length_, pad_);
    flush();
  }
  return take_completed();
}

std::vector<PackedSequence> pack_sequences(std::span<const std::vector<TokenId>> docs, std::size_t length,
                                           PackPolicy policy, const Tokenizer& tokenizer, PackStats* stats) {
  SequencePacker packer(length, policy, tokenizer.doc_separator(), tokenizer.pad());
  for (const auto& doc : docs) packer.add(doc);
  auto out = packer.finish();
  if (stats) *stats = packer.stats();
  return out;
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error(Errc::bad_shard, "truncated shard");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(bytes[i]) << (8 * i));
  return value;
}

}  // namespace

void write_shard(std::ostream& out, const Shard& shard) {
  out.write("CPKD", 4);
  put_le<std::uint16_t>(out, kShardVersion);
  put_le<std::uint32_t>(out, shard.length);
  put_le<std::uint64_t>(out, shard.sequences.size());
  for (const PackedSequence& seq : shard.sequences) {
    if (seq.tokens.size() != shard.length) throw Error(Errc::bad_shard, "sequence length differs from shard L");
    for (TokenId id : seq.tokens) put_le<std::uint32_t>(out, id);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(seq.boundaries.size()));
    for (std::uint16_t b : seq.boundaries) put_le<std::uint16_t>(out, b);
  }
  if (!out) throw Error(Errc::io_error, "failed writing shard");
}

Shard read_shard(std::istream& in, TokenId pad) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string_view(magic, 4) != "CPKD") throw Error(Errc::bad_shard, "bad shard magic");
  const auto version = get_le<std::uint16_t>(in);
  if (version != kShardVersion) throw Error(Errc::bad_shard, "unsupported shard version " + std::to_string(version));
  Shard shard;
  shard.length = get_le<std::uint32_t>(in);
  const auto count = get_le<std::uint64_t>(in);
  for (std::uint64_t s = 0; s < count; ++s) {
    PackedSequence seq;
    seq.tokens.resize(shard.length);
    for (auto& id : seq.tokens) id = get_le<std::uint32_t>(in);
    seq.boundaries.resize(get_le<std::uint16_t>(in));
    for (auto& b : seq.boundaries) b = get_le<std::uint16_t>(in);
    while (seq.pad_count < seq.tokens.size() && seq.tokens[seq.tokens.size() - 1 - seq.pad_count] == pad) {
      ++seq.pad_count;
    }
    shard.sequences.push_back(std::move(seq));
  }
  return shard;
}

void write_shard_file(const std::filesystem::path& path, const Shard& shard) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  write_shard(out, shard);
}

Shard read_shard_file(const std::filesystem::path& path, TokenId pad) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::unreadable_input, "cannot open " + path.string());
  return read_shard(in, pad);
}

nlohmann::json shard_sidecar(const Shard& shard, TokenId separator, TokenId pad) {
  std::size_t content = 0, separators = 0, pads = 0, docs = 0;
  for (const PackedSequence& seq : shard.sequences) {
    docs += seq.boundaries.size();
    for (TokenId id : seq.tokens) {
      if (id == pad) {
        ++pads;
      } else if (id == separator) {
        ++separators;
      } else {
        ++content;
      }
    }
  }
  return {{"format", "CPKD"},
          {"version", kShardVersion},
          {"sequence_length", shard.length},
          {"sequences", shard.sequences.size()},
          {"document_starts", docs},
          {"content_tokens", content},
          {"separator_tokens", separators},
          {"pad_tokens", pads}};
}

}  // namespace corpusmix
