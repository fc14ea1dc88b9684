#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpusmix/document.hpp"
#include "corpusmix/hashing.hpp"

namespace corpusmix {

enum class TaskType { CLS, GEN, IE, MRC };

std::string_view to_string(TaskType t) noexcept;
TaskType parse_task_type(std::string_view s);

struct Demonstration {
  std::string input;
  std::string output;
};

struct EvalInstance {
  std::string id;
  std::string task;  // e.g. AVE, PDC, TIG
  TaskType type = TaskType::GEN;
  std::vector<Demonstration> demos;
  std::string input;
  std::vector<std::string> refs;
  Language language = Language::en;
};

EvalInstance parse_eval_instance(std::string_view jsonl_line);
nlohmann::json to_json(const EvalInstance& inst);

// Placeholders: {in} and {out} in the demonstration block, {query} in the
// query block.
struct PromptTemplate {
  std::string demonstration = "Input: {in}\nOutput: {out}";
  std::string query = "Input: {query}\nOutput:";
  std::string joiner = "\n\n";
};

inline constexpr std::size_t kDefaultShots = 3;

// The first k demonstrations, in order, followed by the query. Throws
// insufficient_demonstrations when k exceeds what the instance carries.
std::string build_icl_prompt(const EvalInstance& inst, std::size_t k, const PromptTemplate& tmpl = {});

enum class RougeUnit { token, character };

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// LCS-based ROUGE-L with beta = 1. Throws invalid_argument on an empty reference.
RougeScore score_rouge_l(std::string_view candidate, std::string_view reference, RougeUnit unit);

// Characters for Chinese, whitespace tokens otherwise.
RougeUnit rouge_unit_for(Language lang) noexcept;

// trim, casefold, then strip trailing punctuation.
std::string normalize_answer(std::string_view s);

struct AccuracyResult {
  double value = 0.0;
  std::vector<double> per_instance;
};

AccuracyResult score_accuracy(std::span<const std::string> predictions,
                              std::span<const std::vector<std::string>> references);

struct Span {
  std::string type;
  std::string text;
  auto operator<=>(const Span&) const = default;
};

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Exact match on (type, normalized text).
PRF score_ie_prf(const std::set<Span>& predicted, const std::set<Span>& gold);

// "type: text" items separated by ';' or newlines. An item without a colon
// has an empty type.
std::set<Span> parse_spans(std::string_view s);

// Sorted indices of a seeded uniform sample without replacement; all indices
// when n <= cap.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t cap, std::uint64_t seed);

inline constexpr std::size_t kDefaultEvalCap = 1000;

template <typename T>
std::vector<T> sample_eval_subset(std::span<const T> instances, std::size_t cap, std::uint64_t seed) {
  std::vector<T> out;
  for (std::size_t i : sample_indices(instances.size(), cap, seed)) out.push_back(instances[i]);
  return out;
}

struct ScoreReport {
  std::string task;
  std::string metric;  // rouge_l, accuracy, precision, recall, f1
  double value = 0.0;  // mean of per_instance
  std::vector<double> per_instance;
};

// Scores predictions keyed by instance id. ROUGE-L for every task, accuracy
// for CLS, precision/recall/f1 for IE. Missing predictions score as empty
// output.
std::vector<ScoreReport> evaluate(std::span<const EvalInstance> instances,
                                  const std::map<std::string, std::string>& predictions);

// {task -> {metric -> value}}
nlohmann::json report_json(std::span<const ScoreReport> reports);

}  // namespace corpusmix
