#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "corpusmix/document.hpp"
#include "corpusmix/pack.hpp"

namespace corpusmix {

struct TokenTally {
  std::size_t documents = 0;
  std::size_t tokens = 0;
};

// Exact counts over a document set. Shares are percentages of total tokens.
struct CorpusStats {
  std::map<std::string, TokenTally> by_source;
  std::map<std::string, TokenTally> by_language;
  TokenTally domain;
  TokenTally general;
  TokenTally total;

  double share_percent(const std::string& source) const;
  // Domain tokens as a percentage of general tokens.
  double domain_to_general_percent() const;
};

CorpusStats corpus_stats(std::span<const Document> docs);

struct PackedStats {
  std::size_t shards = 0;
  std::size_t sequences = 0;
  std::size_t content_tokens = 0;
  std::size_t separator_tokens = 0;
  std::size_t pad_tokens = 0;
};

PackedStats packed_stats(std::span<const Shard> shards, TokenId separator, TokenId pad);

nlohmann::json to_json(const CorpusStats& stats);
nlohmann::json to_json(const PackedStats& stats);

}  // namespace corpusmix
