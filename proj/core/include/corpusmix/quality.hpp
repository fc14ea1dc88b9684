#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpusmix/document.hpp"

namespace corpusmix {

struct FilterPolicy {
  std::size_t min_chars = 20;
  std::size_t max_chars = 100000;
  double max_symbol_ratio = 0.5;
  double min_distinct_char_ratio = 0.05;

  // Throws invalid_config when min_chars >= max_chars or a ratio is outside [0,1].
  void validate() const;
};

enum class FilterRule { too_short, too_long, symbol_ratio, low_diversity };

std::string_view to_string(FilterRule rule) noexcept;

// Character statistics over code points; whitespace is excluded from the
// ratios but counted in the length.
struct TextProfile {
  std::size_t chars = 0;
  std::size_t non_space = 0;
  std::size_t symbols = 0;
  std::size_t distinct = 0;
};

TextProfile profile_text(std::string_view text);

// Distinct code points are measured against min(non_space, kDiversityWindow)
// so the ratio does not shrink with document length.
inline constexpr std::size_t kDiversityWindow = 100;

// Returns the first violated rule, or nullopt to keep.
std::optional<FilterRule> apply_quality_filter(const Document& doc, const FilterPolicy& policy);

struct FilterDrop {
  std::size_t doc_ref = 0;
  FilterRule rule = FilterRule::too_short;
};

struct FilterOutcome {
  std::vector<std::size_t> kept;
  std::vector<FilterDrop> dropped;
};

FilterOutcome filter_documents(std::span<const Document> docs, const FilterPolicy& policy,
                               std::size_t workers = 1);

struct DedupParams {
  std::size_t num_hashes = 128;
  std::size_t bands = 16;
  std::size_t rows = 8;
  std::size_t shingle_size = 5;
  double jaccard_threshold = 0.8;

  void validate() const;
};

enum class DuplicateKind { exact, near };

struct DuplicateDrop {
  std::size_t doc_ref = 0;
  std::size_t duplicate_of = 0;
  DuplicateKind kind = DuplicateKind::exact;
  double jaccard = 1.0;
};

// Kept indices are ascending, so survivors are a subsequence of the input.
struct DedupOutcome {
  std::vector<std::size_t> kept;
  std::vector<DuplicateDrop> dropped;
};

// First occurrence of each byte-identical text survives.
DedupOutcome exact_dedup(std::span<const Document> docs);

// Sorted, unique 64-bit hashes of word-unit shingles. Empty when the text has
// fewer units than shingle_size.
std::vector<std::uint64_t> shingle_hashes(std::string_view text, std::size_t shingle_size);

double jaccard(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

std::vector<std::uint64_t> minhash_signature(std::span<const std::uint64_t> shingles, std::size_t num_hashes);

// MinHash LSH proposes candidate pairs among already-kept documents; exact
// Jaccard over shingle sets decides. Signatures are computed in parallel,
// drop decisions in one sequential pass, so the result does not depend on
// the worker count.
DedupOutcome near_dedup(std::span<const Document> docs, const DedupParams& params, std::size_t workers = 1);

template <typename T>
std::vector<T> gather(std::span<const T> items, std::span<const std::size_t> indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(items[i]);
  return out;
}

}  // namespace corpusmix
