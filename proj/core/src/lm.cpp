#include "corpusmix/lm.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>

#include "corpusmix/error.hpp"
#include "corpusmix/hashing.hpp"
#include "corpusmix/parallel.hpp"

namespace corpusmix {

std::size_t NGramContextHash::operator()(const NGramContext& ctx) const noexcept {
  std::uint64_t h = mix64(ctx.size());
  for (TokenId id : ctx) h = mix64(h ^ id);
  return static_cast<std::size_t>(h);
}

NGramModel::NGramModel(std::size_t order, double k, std::vector<TokenId> vocabulary)
    : order_(order), k_(k), vocabulary_(std::move(vocabulary)) {
  if (order_ < 1) throw Error(Errc::invalid_argument, "n-gram order must be >= 1");
  if (!(k_ > 0.0)) throw Error(Errc::invalid_argument, "add-k smoothing requires k > 0");
  std::sort(vocabulary_.begin(), vocabulary_.end());
  vocabulary_.erase(std::unique(vocabulary_.begin(), vocabulary_.end()), vocabulary_.end());
  if (vocabulary_.empty()) throw Error(Errc::empty_corpus, "n-gram vocabulary is empty");
}

void NGramModel::add_observation(std::span<const TokenId> context, TokenId token, std::uint64_t count) {
  auto& entry = table_[NGramContext(context.begin(), context.end())];
  entry.total += count;
  entry.next[token] += count;
}

void NGramModel::merge(const NGramModel& other) {
  for (const auto& [ctx, counts] : other.table_) {
    auto& entry = table_[ctx];
    entry.total += counts.total;
    for (const auto& [tok, c] : counts.next) entry.next[tok] += c;
  }
}

std::uint64_t NGramModel::count(std::span<const TokenId> context, TokenId token) const {
  auto it = table_.find(NGramContext(context.begin(), context.end()));
  if (it == table_.end()) return 0;
  auto jt = it->second.next.find(token);
  return jt == it->second.next.end() ? 0 : jt->second;
}

std::uint64_t NGramModel::context_total(std::span<const TokenId> context) const {
  auto it = table_.find(NGramContext(context.begin(), context.end()));
  return it == table_.end() ? 0 : it->second.total;
}

double NGramModel::probability(std::span<const TokenId> context, TokenId token) const {
  const double num = static_cast<double>(count(context, token)) + k_;
  const double den = static_cast<double>(context_total(context)) + k_ * static_cast<double>(vocabulary_.size());
  return num / den;
}

double NGramModel::log_probability(std::span<const TokenId> context, TokenId token) const {
  const double num = static_cast<double>(count(context, token)) + k_;
  const double den = static_cast<double>(context_total(context)) + k_ * static_cast<double>(vocabulary_.size());
  return std::log(num) - std::log(den);
}

NGramContext NGramModel::context_at(std::span<const TokenId> y, std::size_t i) const {
  const std::size_t width = order_ - 1;
  NGramContext ctx(width, kBeginOfSequence);
  for (std::size_t j = 0; j < width; ++j) {
    // ctx[j] holds y[i - width + j]
    if (i + j >= width) ctx[j] = y[i + j - width];
  }
  return ctx;
}

namespace {

std::string format_context(const NGramContext& ctx) {
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out.push_back(' ');
    out += ctx[i] == kBeginOfSequence ? std::string("<s>") : std::to_string(ctx[i]);
  }
  return out;
}

NGramContext parse_context(const std::string& s) {
  NGramContext ctx;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    ctx.push_back(tok == "<s>" ? kBeginOfSequence : static_cast<TokenId>(std::stoul(tok)));
  }
  return ctx;
}

}  // namespace

void NGramModel::dump(std::ostream& out) const {
  out << "#order\t" << order_ << "\n";
  out << "#k\t" << std::setprecision(17) << k_ << "\n";
  out << "#vocab\t";
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) out << (i ? " " : "") << vocabulary_[i];
  out << "\n";
  std::vector<const NGramContext*> contexts;
  contexts.reserve(table_.size());
  for (const auto& entry : table_) contexts.push_back(&entry.first);
  std::sort(contexts.begin(), contexts.end(), [](const auto* a, const auto* b) { return *a < *b; });
  for (const NGramContext* ctx : contexts) {
    const std::string prefix = format_context(*ctx);
    for (const auto& [tok, c] : table_.at(*ctx).next) out << prefix << '\t' << tok << '\t' << c << '\n';
  }
}

NGramModel NGramModel::load(std::istream& in) {
  std::size_t order = 0;
  double k = 0.0;
  std::vector<TokenId> vocab;
  std::vector<std::tuple<NGramContext, TokenId, std::uint64_t>> rows;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto t1 = line.find('\t');
      if (t1 == std::string::npos) throw Error(Errc::unreadable_input, "bad model line: " + line);
      if (line[0] == '#') {
        const std::string key = line.substr(1, t1 - 1);
        const std::string value = line.substr(t1 + 1);
        if (key == "order") {
          order = std::stoul(value);
        } else if (key == "k") {
          k = std::stod(value);
        } else if (key == "vocab") {
          std::istringstream vs(value);
          std::uint64_t id;
          while (vs >> id) vocab.push_back(static_cast<TokenId>(id));
        }
        continue;
      }
      const auto t2 = line.find('\t', t1 + 1);
      if (t2 == std::string::npos) throw Error(Errc::unreadable_input, "bad model line: " + line);
      rows.emplace_back(parse_context(line.substr(0, t1)), static_cast<TokenId>(std::stoul(line.substr(t1 + 1, t2 - t1 - 1))),
                        std::stoull(line.substr(t2 + 1)));
    }
  } catch (const std::logic_error& e) {
    throw Error(Errc::unreadable_input, std::string("bad model table: ") + e.what());
  }
  NGramModel model(order, k, std::move(vocab));
  for (const auto& [ctx, tok, c] : rows) {
    if (ctx.size() + 1 != order) throw Error(Errc::unreadable_input, "context width does not match model order");
    model.add_observation(ctx, tok, c);
  }
  return model;
}

NGramModel train_ngram(std::span<const std::vector<TokenId>> corpus, std::size_t order, double k,
                       std::vector<TokenId> vocabulary, std::size_t workers) {
  std::size_t total = 0;
  for (const auto& seq : corpus) total += seq.size();
  if (total == 0) throw Error(Errc::empty_corpus, "cannot train on an empty corpus");
  if (vocabulary.empty()) {
    std::set<TokenId> seen;
    for (const auto& seq : corpus) seen.insert(seq.begin(), seq.end());
    vocabulary.assign(seen.begin(), seen.end());
  }
  NGramModel model(order, k, vocabulary);

  // count per slice, merge in slice order
  workers = std::max<std::size_t>(1, std::min(workers, corpus.size()));
  std::vector<NGramModel> partial(workers, NGramModel(order, k, vocabulary));
  const std::size_t chunk = (corpus.size() + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::size_t end = std::min(corpus.size(), (w + 1) * chunk);
    for (std::size_t s = w * chunk; s < end; ++s) {
      const auto& seq = corpus[s];
      for (std::size_t i = 0; i < seq.size(); ++i) partial[w].add_observation(partial[w].context_at(seq, i), seq[i]);
    }
  });
  for (const NGramModel& p : partial) model.merge(p);
  return model;
}

ScoredSequence sequence_log_likelihood(const NGramModel& model, std::span<const TokenId> y) {
  if (y.empty()) throw Error(Errc::invalid_argument, "cannot score an empty sequence");
  ScoredSequence out;
  out.tokens.assign(y.begin(), y.end());
  out.log_probs.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double lp = model.log_probability(model.context_at(y, i), y[i]);
    out.log_probs.push_back(lp);
    out.total += lp;
  }
  return out;
}

double perplexity(const NGramModel& model, std::span<const std::vector<TokenId>> corpus) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& seq : corpus) {
    if (seq.empty()) continue;
    sum += sequence_log_likelihood(model, seq).total;
    n += seq.size();
  }
  if (n == 0) throw Error(Errc::empty_corpus, "perplexity needs at least one token");
  return std::exp(-sum / static_cast<double>(n));
}

}  // namespace corpusmix
