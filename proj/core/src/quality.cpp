#include "corpusmix/quality.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "corpusmix/error.hpp"
#include "corpusmix/hashing.hpp"
#include "corpusmix/parallel.hpp"
#include "corpusmix/text.hpp"

namespace corpusmix {

void FilterPolicy::validate() const {
  if (min_chars >= max_chars) throw Error(Errc::invalid_config, "filter: min_chars must be < max_chars");
  auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!in_unit(max_symbol_ratio) || !in_unit(min_distinct_char_ratio)) {
    throw Error(Errc::invalid_config, "filter: ratios must lie in [0, 1]");
  }
}

std::string_view to_string(FilterRule rule) noexcept {
  switch (rule) {
    case FilterRule::too_short: return "too_short";
    case FilterRule::too_long: return "too_long";
    case FilterRule::symbol_ratio: return "symbol_ratio";
    case FilterRule::low_diversity: return "low_diversity";
  }
  return "unknown";
}

TextProfile profile_text(std::string_view s) {
  TextProfile p;
  std::unordered_set<char32_t> seen;
  for (char32_t cp : text::decode_utf8(s)) {
    ++p.chars;
    if (text::is_whitespace(cp)) continue;
    ++p.non_space;
    if (text::is_punctuation_or_symbol(cp)) ++p.symbols;
    seen.insert(cp);
  }
  p.distinct = seen.size();
  return p;
}

std::optional<FilterRule> apply_quality_filter(const Document& doc, const FilterPolicy& policy) {
  const TextProfile p = profile_text(doc.text);
  if (p.chars < policy.min_chars) return FilterRule::too_short;
  if (p.chars > policy.max_chars) return FilterRule::too_long;
  if (p.non_space == 0) return FilterRule::low_diversity;
  if (static_cast<double>(p.symbols) / static_cast<double>(p.non_space) > policy.max_symbol_ratio) {
    return FilterRule::symbol_ratio;
  }
  const double window = static_cast<double>(std::min(p.non_space, kDiversityWindow));
  if (static_cast<double>(p.distinct) / window < policy.min_distinct_char_ratio) return FilterRule::low_diversity;
  return std::nullopt;
}

FilterOutcome filter_documents(std::span<const Document> docs, const FilterPolicy& policy, std::size_t workers) {
  policy.validate();
  std::vector<std::optional<FilterRule>> verdicts(docs.size());
  parallel_for(docs.size(), workers, [&](std::size_t i) { verdicts[i] = apply_quality_filter(docs[i], policy); });
  FilterOutcome out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (verdicts[i]) {
      out.dropped.push_back({i, *verdicts[i]});
    } else {
      out.kept.push_back(i);
    }
  }
  return out;
}

void DedupParams::validate() const {
  if (num_hashes == 0 || bands * rows != num_hashes) {
    throw Error(Errc::invalid_config, "dedup: bands * rows must equal num_hashes");
  }
  if (shingle_size == 0) throw Error(Errc::invalid_config, "dedup: shingle_size must be positive");
  if (!(jaccard_threshold > 0.0 && jaccard_threshold < 1.0)) {
    throw Error(Errc::invalid_config, "dedup: jaccard_threshold must lie in (0, 1)");
  }
}

DedupOutcome exact_dedup(std::span<const Document> docs) {
  DedupOutcome out;
  // hash -> kept indices with that hash; texts are compared on a hit
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
  seen.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto& bucket = seen[fnv1a64(docs[i].text)];
    auto match = std::find_if(bucket.begin(), bucket.end(),
                              [&](std::size_t j) { return docs[j].text == docs[i].text; });
    if (match != bucket.end()) {
      out.dropped.push_back({i, *match, DuplicateKind::exact, 1.0});
    } else {
      bucket.push_back(i);
      out.kept.push_back(i);
    }
  }
  return out;
}

std::vector<std::uint64_t> shingle_hashes(std::string_view s, std::size_t shingle_size) {
  const std::vector<std::string> units = text::word_units(s);
  std::vector<std::uint64_t> out;
  if (shingle_size == 0 || units.size() < shingle_size) return out;
  out.reserve(units.size() - shingle_size + 1);
  for (std::size_t i = 0; i + shingle_size <= units.size(); ++i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t k = 0; k < shingle_size; ++k) {
      h = fnv1a64(units[i + k], h);
      h = fnv1a64("\x1f", h);
    }
    out.push_back(h);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++inter, ++i, ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::uint64_t> minhash_signature(std::span<const std::uint64_t> shingles, std::size_t num_hashes) {
  std::vector<std::uint64_t> sig(num_hashes, ~std::uint64_t{0});
  for (std::size_t k = 0; k < num_hashes; ++k) {
    const std::uint64_t salt = mix64(0x5eed0000ULL + k);
    std::uint64_t best = ~std::uint64_t{0};
    for (std::uint64_t s : shingles) best = std::min(best, mix64(s ^ salt));
    sig[k] = best;
  }
  return sig;
}

DedupOutcome near_dedup(std::span<const Document> docs, const DedupParams& params, std::size_t workers) {
  params.validate();

  // phase 1: per-document shingles and band keys
  std::vector<std::vector<std::uint64_t>> shingles(docs.size());
  std::vector<std::vector<std::uint64_t>> band_keys(docs.size());
  parallel_for(docs.size(), workers, [&](std::size_t i) {
    shingles[i] = shingle_hashes(docs[i].text, params.shingle_size);
    if (shingles[i].empty()) return;
    const auto sig = minhash_signature(shingles[i], params.num_hashes);
    auto& keys = band_keys[i];
    keys.resize(params.bands);
    for (std::size_t b = 0; b < params.bands; ++b) {
      std::uint64_t h = mix64(b);
      for (std::size_t r = 0; r < params.rows; ++r) h = mix64(h ^ sig[b * params.rows + r]);
      keys[b] = h;
    }
  });

  // phase 2: sequential drop decisions in stream order
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::size_t>>> buckets(params.bands);
  DedupOutcome out;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (shingles[i].empty()) {
      out.kept.push_back(i);
      continue;
    }
    candidates.clear();
    for (std::size_t b = 0; b < params.bands; ++b) {
      auto it = buckets[b].find(band_keys[i][b]);
      if (it != buckets[b].end()) candidates.insert(candidates.end(), it->second.begin(), it->second.end());
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    bool dropped = false;
    for (std::size_t j : candidates) {
      const double sim = jaccard(shingles[i], shingles[j]);
      if (sim >= params.jaccard_threshold) {
        out.dropped.push_back({i, j, DuplicateKind::near, sim});
        dropped = true;
        break;
      }
    }
    if (dropped) continue;
    out.kept.push_back(i);
    for (std::size_t b = 0; b < params.bands; ++b) buckets[b][band_keys[i][b]].push_back(i);
  }
  return out;
}

}  // namespace corpusmix
