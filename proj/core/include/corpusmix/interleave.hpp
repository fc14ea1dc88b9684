#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpusmix/mixer.hpp"

namespace corpusmix {

inline constexpr std::string_view kDomainStream = "domain";
inline constexpr std::string_view kGeneralZhStream = "general_zh";
inline constexpr std::string_view kGeneralEnStream = "general_en";

struct Ratio {
  std::uint64_t left = 1;
  std::uint64_t right = 1;

  double value() const { return static_cast<double>(left) / static_cast<double>(right); }
  // Parses "2:1".
  static Ratio parse(std::string_view s);
  std::string str() const { return std::to_string(left) + ":" + std::to_string(right); }
};

struct RatioSpec {
  Ratio general_to_domain{2, 1};
  Ratio zh_to_en_within_general{1, 1};
  double tolerance = 0.05;

  void validate() const;
  // Integer weights for domain / general_zh / general_en, reduced by their gcd.
  std::map<std::string, std::uint64_t, std::less<>> stream_weights() const;
};

struct MixPlan {
  std::map<std::string, std::uint64_t, std::less<>> weights;
  std::map<std::string, std::uint64_t, std::less<>> budgets;
  std::string limiting_stream;
};

// Scales the weight vector by the largest factor that keeps every budget
// within availability; budgets are floored to whole tokens. Throws
// empty_stream when a weighted stream has no tokens.
MixPlan plan_weighted(const std::map<std::string, std::uint64_t, std::less<>>& available,
                      const std::map<std::string, std::uint64_t, std::less<>>& weights);

MixPlan plan_mixture(const std::map<std::string, std::uint64_t, std::less<>>& available, const RatioSpec& spec);

struct Shortfall {
  std::string stream;
  std::uint64_t budget = 0;    // planned
  std::uint64_t realized = 0;  // when the stream ran dry
};

struct InterleaveResult {
  std::vector<TrainingSample> output;
  std::vector<std::string> stream_of;  // parallel to output
  std::map<std::string, std::uint64_t, std::less<>> realized;
  std::map<std::string, std::uint64_t, std::less<>> final_budgets;  // after shortfall rescaling
  std::vector<Shortfall> shortfalls;
};

using StreamMap = std::map<std::string, std::vector<TrainingSample>, std::less<>>;

// Deficit scheduler: each step emits the next sample of the stream that has
// consumed the smallest fraction of its budget. Ties go to a seeded stream
// order. When a stream runs dry every other budget is scaled to the same
// fraction and the shortfall is reported.
InterleaveResult interleave_streams(const StreamMap& streams, const MixPlan& plan, std::uint64_t seed);

// Routes samples to domain / general_zh / general_en. General samples in
// other languages land in an "general_other" stream that is never planned.
StreamMap route_samples(std::vector<TrainingSample> samples);

// {budgets, realized, limiting_stream, ratios, shortfalls}
nlohmann::json mix_report(const MixPlan& plan, const InterleaveResult& result);

}  // namespace corpusmix
