#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace corpusmix {

enum class SourceKind { product_info, review, article, general_web, user_defined };

enum class Language { zh, en, other };

std::string_view to_string(SourceKind kind) noexcept;
std::string_view to_string(Language lang) noexcept;
std::optional<SourceKind> parse_source_kind(std::string_view s) noexcept;
// Accepts "zh", "en", "other" plus common variants ("zh-CN", "en-US", "cn").
std::optional<Language> parse_language(std::string_view s) noexcept;

// Only general_web is general-domain text; every other source, user-defined
// ones included, counts as domain data.
constexpr bool is_general_source(std::string_view source) noexcept { return source == "general_web"; }

// Linearized record, the unit that flows through filtering, dedup and the graph.
struct Document {
  std::string text;
  std::string source;  // built-in kind name or user-defined source name
  std::optional<std::string> entity_key;
  Language language = Language::other;
  std::size_t token_count = 0;

  friend bool operator==(const Document&, const Document&) = default;
};

}  // namespace corpusmix
