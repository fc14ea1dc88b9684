#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "corpusmix/tokenizer.hpp"

namespace corpusmix {

// Context slot before the first token of a sequence.
inline constexpr TokenId kBeginOfSequence = 0xFFFFFFFFu;

using NGramContext = std::vector<TokenId>;

struct NGramContextHash {
  std::size_t operator()(const NGramContext& ctx) const noexcept;
};

struct ContextCounts {
  std::uint64_t total = 0;
  std::map<TokenId, std::uint64_t> next;
};

// Add-k smoothed n-gram model:
//   P(t | ctx) = (c(ctx, t) + k) / (c(ctx) + k * |V|)
// where ctx is the previous n-1 tokens, padded with kBeginOfSequence.
class NGramModel {
 public:
  NGramModel(std::size_t order, double k, std::vector<TokenId> vocabulary);

  std::size_t order() const { return order_; }
  double k() const { return k_; }
  const std::vector<TokenId>& vocabulary() const { return vocabulary_; }
  std::size_t vocab_size() const { return vocabulary_.size(); }

  void add_observation(std::span<const TokenId> context, TokenId token, std::uint64_t count = 1);
  void merge(const NGramModel& other);

  std::uint64_t count(std::span<const TokenId> context, TokenId token) const;
  std::uint64_t context_total(std::span<const TokenId> context) const;
  double probability(std::span<const TokenId> context, TokenId token) const;
  double log_probability(std::span<const TokenId> context, TokenId token) const;

  // Context of length order-1 ending just before position i of y.
  NGramContext context_at(std::span<const TokenId> y, std::size_t i) const;

  const std::unordered_map<NGramContext, ContextCounts, NGramContextHash>& table() const { return table_; }

  // Sorted text table: "<context ids>\t<token id>\t<count>", with header
  // lines "#order", "#k", "#vocab". BOS renders as "<s>".
  void dump(std::ostream& out) const;
  static NGramModel load(std::istream& in);

 private:
  std::size_t order_;
  double k_;
  std::vector<TokenId> vocabulary_;  // sorted, unique
  std::unordered_map<NGramContext, ContextCounts, NGramContextHash> table_;
};

// Vocabulary defaults to the ids observed in the corpus. Throws empty_corpus
// when the corpus holds no tokens, invalid_argument on order < 1 or k <= 0.
NGramModel train_ngram(std::span<const std::vector<TokenId>> corpus, std::size_t order, double k,
                       std::vector<TokenId> vocabulary = {}, std::size_t workers = 1);

struct ScoredSequence {
  std::vector<TokenId> tokens;
  std::vector<double> log_probs;  // natural log, one per position
  double total = 0.0;
};

// Per-position log P(y_i | y_<i) and their sum: the autoregressive
// log-likelihood of y under the model.
ScoredSequence sequence_log_likelihood(const NGramModel& model, std::span<const TokenId> y);

// exp(-(sum of log-likelihoods) / total tokens)
double perplexity(const NGramModel& model, std::span<const std::vector<TokenId>> corpus);

}  // namespace corpusmix
