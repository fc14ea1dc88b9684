#include "corpusmix/interleave.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "corpusmix/error.hpp"
#include "corpusmix/hashing.hpp"

namespace corpusmix {

__extension__ using u128 = unsigned __int128;

Ratio Ratio::parse(std::string_view s) {
  const auto colon = s.find(':');
  Ratio r;
  auto parse_part = [&](std::string_view part, std::uint64_t& out) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw Error(Errc::invalid_config, "bad ratio '" + std::string(s) + "', expected N:M");
    }
  };
  if (colon == std::string_view::npos) throw Error(Errc::invalid_config, "bad ratio '" + std::string(s) + "'");
  parse_part(s.substr(0, colon), r.left);
  parse_part(s.substr(colon + 1), r.right);
  return r;
}

void RatioSpec::validate() const {
  if (general_to_domain.left == 0 || general_to_domain.right == 0 || zh_to_en_within_general.left == 0 ||
      zh_to_en_within_general.right == 0) {
    throw Error(Errc::invalid_config, "ratio parts must be positive");
  }
  if (!(tolerance > 0.0 && tolerance < 0.5)) throw Error(Errc::invalid_config, "tolerance must lie in (0, 0.5)");
}

std::map<std::string, std::uint64_t, std::less<>> RatioSpec::stream_weights() const {
  const std::uint64_t g = general_to_domain.left;
  const std::uint64_t d = general_to_domain.right;
  const std::uint64_t zh = zh_to_en_within_general.left;
  const std::uint64_t en = zh_to_en_within_general.right;
  std::uint64_t w_domain = d * (zh + en);
  std::uint64_t w_zh = g * zh;
  std::uint64_t w_en = g * en;
  const std::uint64_t div = std::gcd(w_domain, std::gcd(w_zh, w_en));
  return {{std::string(kDomainStream), w_domain / div},
          {std::string(kGeneralZhStream), w_zh / div},
          {std::string(kGeneralEnStream), w_en / div}};
}

MixPlan plan_weighted(const std::map<std::string, std::uint64_t, std::less<>>& available,
                      const std::map<std::string, std::uint64_t, std::less<>>& weights) {
  if (weights.empty()) throw Error(Errc::invalid_config, "plan: no streams to mix");
  MixPlan plan;
  plan.weights = weights;
  const std::string* limiting = nullptr;
  std::uint64_t lim_avail = 0;
  std::uint64_t lim_weight = 1;
  for (const auto& [stream, weight] : weights) {
    if (weight == 0) throw Error(Errc::invalid_config, "plan: stream '" + stream + "' has zero weight");
    auto it = available.find(stream);
    const std::uint64_t avail = it == available.end() ? 0 : it->second;
    if (avail == 0) throw Error(Errc::empty_stream, "stream '" + stream + "' has no tokens");
    // avail / weight < lim_avail / lim_weight
    if (!limiting || u128(avail) * lim_weight < u128(lim_avail) * weight) {
      limiting = &stream;
      lim_avail = avail;
      lim_weight = weight;
    }
  }
  plan.limiting_stream = *limiting;
  for (const auto& [stream, weight] : weights) {
    plan.budgets[stream] = static_cast<std::uint64_t>(u128(lim_avail) * weight / lim_weight);
  }
  return plan;
}

MixPlan plan_mixture(const std::map<std::string, std::uint64_t, std::less<>>& available, const RatioSpec& spec) {
  spec.validate();
  return plan_weighted(available, spec.stream_weights());
}

InterleaveResult interleave_streams(const StreamMap& streams, const MixPlan& plan, std::uint64_t seed) {
  struct State {
    std::string name;
    const std::vector<TrainingSample>* samples = nullptr;
    std::size_t pos = 0;
    std::uint64_t emitted = 0;
    std::uint64_t budget = 0;
    std::size_t rank = 0;
    bool done = false;
  };
  static const std::vector<TrainingSample> kEmpty;

  std::vector<State> states;
  for (const auto& [name, budget] : plan.budgets) {
    State st;
    st.name = name;
    auto it = streams.find(name);
    st.samples = it == streams.end() ? &kEmpty : &it->second;
    st.budget = budget;
    st.done = budget == 0;
    states.push_back(std::move(st));
  }
  std::vector<std::size_t> ranks(states.size());
  std::iota(ranks.begin(), ranks.end(), 0);
  Rng(seed).shuffle(std::span<std::size_t>(ranks));
  for (std::size_t i = 0; i < states.size(); ++i) states[ranks[i]].rank = i;

  InterleaveResult out;
  while (true) {
    State* pick = nullptr;
    for (State& st : states) {
      if (st.done || st.emitted >= st.budget) continue;
      if (!pick) {
        pick = &st;
        continue;
      }
      const u128 lhs = u128(st.emitted) * pick->budget;
      const u128 rhs = u128(pick->emitted) * st.budget;
      if (lhs < rhs || (lhs == rhs && st.rank < pick->rank)) pick = &st;
    }
    if (!pick) break;

    if (pick->pos == pick->samples->size()) {
      out.shortfalls.push_back({pick->name, plan.budgets.at(pick->name), pick->emitted});
      // scale every budget to the fraction this stream reached
      const std::uint64_t reached = pick->emitted;
      const std::uint64_t of = pick->budget;
      for (State& st : states) {
        if (&st == pick) continue;
        st.budget = std::min(st.budget, static_cast<std::uint64_t>(u128(st.budget) * reached / of));
      }
      pick->budget = reached;
      pick->done = true;
      continue;
    }
    const TrainingSample& s = (*pick->samples)[pick->pos++];
    pick->emitted += s.token_count;
    out.output.push_back(s);
    out.stream_of.push_back(pick->name);
  }
  for (const State& st : states) {
    out.realized[st.name] = st.emitted;
    out.final_budgets[st.name] = st.budget;
  }
  return out;
}

StreamMap route_samples(std::vector<TrainingSample> samples) {
  StreamMap out;
  for (TrainingSample& s : samples) {
    std::string stream;
    if (s.tag == DomainTag::domain) {
      stream = kDomainStream;
    } else if (s.language == Language::zh) {
      stream = kGeneralZhStream;
    } else if (s.language == Language::en) {
      stream = kGeneralEnStream;
    } else {
      stream = "general_other";
    }
    out[stream].push_back(std::move(s));
  }
  return out;
}

nlohmann::json mix_report(const MixPlan& plan, const InterleaveResult& result) {
  nlohmann::json j;
  j["budgets"] = plan.budgets;
  j["weights"] = plan.weights;
  j["realized"] = result.realized;
  j["final_budgets"] = result.final_budgets;
  j["limiting_stream"] = plan.limiting_stream;
  auto get = [&](std::string_view s) -> double {
    auto it = result.realized.find(s);
    return it == result.realized.end() ? 0.0 : static_cast<double>(it->second);
  };
  const double domain = get(kDomainStream);
  const double zh = get(kGeneralZhStream);
  const double en = get(kGeneralEnStream);
  nlohmann::json ratios = nlohmann::json::object();
  if (domain > 0) ratios["general_to_domain"] = (zh + en) / domain;
  if (en > 0) ratios["zh_to_en"] = zh / en;
  j["realized_ratios"] = ratios;
  j["shortfalls"] = nlohmann::json::array();
  for (const Shortfall& s : result.shortfalls) {
    j["shortfalls"].push_back({{"stream", s.stream}, {"budget", s.budget}, {"realized", s.realized}});
  }
  return j;
}

}  // namespace corpusmix
