#include "corpusmix/stats.hpp"

namespace corpusmix {

double CorpusStats::share_percent(const std::string& source) const {
  auto it = by_source.find(source);
  if (it == by_source.end() || total.tokens == 0) return 0.0;
  return 100.0 * static_cast<double>(it->second.tokens) / static_cast<double>(total.tokens);
}

double CorpusStats::domain_to_general_percent() const {
  if (general.tokens == 0) return 0.0;
  return 100.0 * static_cast<double>(domain.tokens) / static_cast<double>(general.tokens);
}

CorpusStats corpus_stats(std::span<const Document> docs) {
  CorpusStats s;
  for (const Document& d : docs) {
    auto bump = [&](TokenTally& t) {
      ++t.documents;
      t.tokens += d.token_count;
    };
    bump(s.by_source[d.source]);
    bump(s.by_language[std::string(to_string(d.language))]);
    bump(is_general_source(d.source) ? s.general : s.domain);
    bump(s.total);
  }
  return s;
}

PackedStats packed_stats(std::span<const Shard> shards, TokenId separator, TokenId pad) {
  PackedStats p;
  p.shards = shards.size();
  for (const Shard& shard : shards) {
    p.sequences += shard.sequences.size();
    for (const PackedSequence& seq : shard.sequences) {
      for (TokenId id : seq.tokens) {
        if (id == pad) {
          ++p.pad_tokens;
        } else if (id == separator) {
          ++p.separator_tokens;
        } else {
          ++p.content_tokens;
        }
      }
    }
  }
  return p;
}

namespace {

nlohmann::json tally_json(const TokenTally& t) { return {{"documents", t.documents}, {"tokens", t.tokens}}; }

}  // namespace

nlohmann::json to_json(const CorpusStats& s) {
  nlohmann::json sources = nlohmann::json::object();
  for (const auto& [name, t] : s.by_source) {
    sources[name] = tally_json(t);
    sources[name]["share_percent"] = s.share_percent(name);
  }
  nlohmann::json langs = nlohmann::json::object();
  for (const auto& [name, t] : s.by_language) langs[name] = tally_json(t);
  return {{"sources", sources},
          {"languages", langs},
          {"domain", tally_json(s.domain)},
          {"general", tally_json(s.general)},
          {"total", tally_json(s.total)},
          {"domain_to_general_percent", s.domain_to_general_percent()}};
}

nlohmann::json to_json(const PackedStats& p) {
  return {{"shards", p.shards},
          {"sequences", p.sequences},
          {"content_tokens", p.content_tokens},
          {"separator_tokens", p.separator_tokens},
          {"pad_tokens", p.pad_tokens}};
}

}  // namespace corpusmix
