#include "corpusmix/eval.hpp"

#include <algorithm>
#include <numeric>

#include "corpusmix/error.hpp"
#include "corpusmix/text.hpp"

namespace corpusmix {

std::string_view to_string(TaskType t) noexcept {
  switch (t) {
    case TaskType::CLS: return "CLS";
    case TaskType::GEN: return "GEN";
    case TaskType::IE: return "IE";
    case TaskType::MRC: return "MRC";
  }
  return "GEN";
}

TaskType parse_task_type(std::string_view s) {
  if (s == "CLS") return TaskType::CLS;
  if (s == "GEN") return TaskType::GEN;
  if (s == "IE") return TaskType::IE;
  if (s == "MRC") return TaskType::MRC;
  throw Error(Errc::malformed_record, "unknown task type '" + std::string(s) + "'");
}

EvalInstance parse_eval_instance(std::string_view line) {
  const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::malformed_record, "benchmark line is not a JSON object");
  try {
    EvalInstance inst;
    inst.id = j.at("id").get<std::string>();
    inst.task = j.at("task").get<std::string>();
    inst.type = parse_task_type(j.at("type").get<std::string>());
    for (const auto& d : j.value("demos", nlohmann::json::array())) {
      inst.demos.push_back({d.at("in").get<std::string>(), d.at("out").get<std::string>()});
    }
    inst.input = j.at("input").get<std::string>();
    inst.refs = j.at("refs").get<std::vector<std::string>>();
    if (inst.refs.empty()) throw Error(Errc::malformed_record, "instance " + inst.id + " has no references");
    inst.language = parse_language(j.value("lang", "en")).value_or(Language::other);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_record, std::string("benchmark instance: ") + e.what());
  }
}

nlohmann::json to_json(const EvalInstance& inst) {
  nlohmann::json demos = nlohmann::json::array();
  for (const auto& d : inst.demos) demos.push_back({{"in", d.input}, {"out", d.output}});
  return {{"id", inst.id},     {"task", inst.task}, {"type", to_string(inst.type)}, {"demos", demos},
          {"input", inst.input}, {"refs", inst.refs}, {"lang", to_string(inst.language)}};
}

namespace {

// Single pass, so placeholder-like text inside values is left alone.
std::string render(std::string_view pattern, std::span<const std::pair<std::string_view, std::string_view>> vars) {
  std::string out;
  std::size_t i = 0;
  while (i < pattern.size()) {
    bool replaced = false;
    if (pattern[i] == '{') {
      for (const auto& [name, value] : vars) {
        if (pattern.compare(i + 1, name.size(), name) == 0 && i + 1 + name.size() < pattern.size() &&
            pattern[i + 1 + name.size()] == '}') {
          out.append(value);
          i += name.size() + 2;
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out.push_back(pattern[i++]);
  }
  return out;
}

}  // namespace

std::string build_icl_prompt(const EvalInstance& inst, std::size_t k, const PromptTemplate& tmpl) {
  if (k > inst.demos.size()) {
    throw Error(Errc::insufficient_demonstrations, "instance " + inst.id + " has " + std::to_string(inst.demos.size()) +
                                                       " demonstrations, " + std::to_string(k) + " requested");
  }
  std::string out;
  for (std::size_t i = 0; i < k; ++i) {
    const std::pair<std::string_view, std::string_view> vars[] = {{"in", inst.demos[i].input},
                                                                  {"out", inst.demos[i].output}};
    out += render(tmpl.demonstration, vars);
    out += tmpl.joiner;
  }
  const std::pair<std::string_view, std::string_view> vars[] = {{"query", inst.input}};
  out += render(tmpl.query, vars);
  return out;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

std::vector<std::string> units_of(std::string_view s, RougeUnit unit) {
  if (unit == RougeUnit::character) return text::char_units(s);
  std::vector<std::string> out;
  for (std::string_view w : text::split_whitespace(s)) out.emplace_back(w);
  return out;
}

}  // namespace

RougeScore score_rouge_l(std::string_view candidate, std::string_view reference, RougeUnit unit) {
  const auto ref = units_of(reference, unit);
  if (ref.empty()) throw Error(Errc::invalid_argument, "ROUGE-L reference is empty");
  const auto cand = units_of(candidate, unit);
  const double lcs = static_cast<double>(lcs_length(cand, ref));
  RougeScore s;
  s.recall = lcs / static_cast<double>(ref.size());
  s.precision = cand.empty() ? 0.0 : lcs / static_cast<double>(cand.size());
  s.f = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

RougeUnit rouge_unit_for(Language lang) noexcept {
  return lang == Language::zh ? RougeUnit::character : RougeUnit::token;
}

std::string normalize_answer(std::string_view s) {
  std::string folded = text::casefold(text::trim(s));
  std::vector<char32_t> cps = text::decode_utf8(folded);
  while (!cps.empty() && (text::is_punctuation_or_symbol(cps.back()) || text::is_whitespace(cps.back()))) {
    cps.pop_back();
  }
  return text::encode_utf8(cps);
}

AccuracyResult score_accuracy(std::span<const std::string> predictions,
                              std::span<const std::vector<std::string>> references) {
  if (predictions.size() != references.size()) {
    throw Error(Errc::length_mismatch, "accuracy: " + std::to_string(predictions.size()) + " predictions vs " +
                                           std::to_string(references.size()) + " references");
  }
  AccuracyResult r;
  r.per_instance.reserve(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const std::string pred = normalize_answer(predictions[i]);
    const bool hit = std::any_of(references[i].begin(), references[i].end(),
                                 [&](const std::string& ref) { return normalize_answer(ref) == pred; });
    r.per_instance.push_back(hit ? 1.0 : 0.0);
  }
  if (!r.per_instance.empty()) {
    r.value = std::accumulate(r.per_instance.begin(), r.per_instance.end(), 0.0) /
              static_cast<double>(r.per_instance.size());
  }
  return r;
}

PRF score_ie_prf(const std::set<Span>& predicted, const std::set<Span>& gold) {
  auto normalized = [](const std::set<Span>& spans) {
    std::set<Span> out;
    for (const Span& s : spans) out.insert({normalize_answer(s.type), normalize_answer(s.text)});
    return out;
  };
  const std::set<Span> pred = normalized(predicted);
  const std::set<Span> ref = normalized(gold);
  std::size_t inter = 0;
  for (const Span& s : pred) inter += ref.count(s);

  PRF r;
  if (pred.empty() && ref.empty()) return {1.0, 1.0, 1.0};
  r.precision = pred.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(pred.size());
  r.recall = ref.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(ref.size());
  r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

std::set<Span> parse_spans(std::string_view s) {
  std::set<Span> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find_first_of(";\n", start);
    const std::string_view item = text::trim(s.substr(start, end == std::string_view::npos ? s.npos : end - start));
    if (!item.empty()) {
      const std::size_t colon = item.find(':');
      if (colon == std::string_view::npos) {
        out.insert({"", std::string(item)});
      } else {
        out.insert({std::string(text::trim(item.substr(0, colon))), std::string(text::trim(item.substr(colon + 1)))});
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t cap, std::uint64_t seed) {
  if (cap == 0) throw Error(Errc::invalid_argument, "sample cap must be positive");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (n <= cap) return idx;
  // partial Fisher-Yates: the first cap slots become a uniform sample
  Rng rng(seed);
  for (std::size_t i = 0; i < cap; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<ScoreReport> evaluate(std::span<const EvalInstance> instances,
                                  const std::map<std::string, std::string>& predictions) {
  // task -> metric -> report, tasks in first-seen order
  std::vector<std::string> task_order;
  std::map<std::string, std::map<std::string, ScoreReport>> by_task;
  auto add = [&](const std::string& task, const char* metric, double v) {
    if (!by_task.count(task)) task_order.push_back(task);
    ScoreReport& r = by_task[task][metric];
    r.task = task;
    r.metric = metric;
    r.per_instance.push_back(v);
  };
  for (const EvalInstance& inst : instances) {
    auto it = predictions.find(inst.id);
    const std::string output = it == predictions.end() ? std::string() : it->second;

    double best = 0.0;
    for (const std::string& ref : inst.refs) {
      if (text::trim(ref).empty()) continue;
      best = std::max(best, score_rouge_l(output, ref, rouge_unit_for(inst.language)).f);
    }
    add(inst.task, "rouge_l", best);

    if (inst.type == TaskType::CLS) {
      const std::string preds[] = {output};
      const std::vector<std::string> refs[] = {inst.refs};
      add(inst.task, "accuracy", score_accuracy(preds, refs).value);
    } else if (inst.type == TaskType::IE) {
      std::set<Span> gold;
      for (const std::string& ref : inst.refs) gold.merge(parse_spans(ref));
      const PRF prf = score_ie_prf(parse_spans(output), gold);
      add(inst.task, "precision", prf.precision);
      add(inst.task, "recall", prf.recall);
      add(inst.task, "f1", prf.f1);
    }
  }

  std::vector<ScoreReport> out;
  for (const std::string& task : task_order) {
    for (auto& [metric, r] : by_task[task]) {
      r.value = std::accumulate(r.per_instance.begin(), r.per_instance.end(), 0.0) /
                static_cast<double>(r.per_instance.size());
      out.push_back(std::move(r));
    }
  }
  return out;
}

nlohmann::json report_json(std::span<const ScoreReport> reports) {
  nlohmann::json j = nlohmann::json::object();
  for (const ScoreReport& r : reports) j[r.task][r.metric] = r.value;
  return j;
}

}  // namespace corpusmix
