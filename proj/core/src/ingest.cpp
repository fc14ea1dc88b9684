#include "corpusmix/ingest.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "corpusmix/parallel.hpp"
#include "corpusmix/text.hpp"

namespace corpusmix {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(SourceKind kind) noexcept {
  switch (kind) {
    case SourceKind::product_info: return "product_info";
    case SourceKind::review: return "review";
    case SourceKind::article: return "article";
    case SourceKind::general_web: return "general_web";
    case SourceKind::user_defined: return "user_defined";
  }
  return "user_defined";
}

std::string_view to_string(Language lang) noexcept {
  switch (lang) {
    case Language::zh: return "zh";
    case Language::en: return "en";
    case Language::other: return "other";
  }
  return "other";
}

std::optional<SourceKind> parse_source_kind(std::string_view s) noexcept {
  if (s == "product_info") return SourceKind::product_info;
  if (s == "review") return SourceKind::review;
  if (s == "article") return SourceKind::article;
  if (s == "general_web") return SourceKind::general_web;
  if (s == "user_defined") return SourceKind::user_defined;
  return std::nullopt;
}

std::optional<Language> parse_language(std::string_view s) noexcept {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c));
  const std::string_view base = std::string_view(lower).substr(0, lower.find_first_of("-_"));
  if (base == "zh" || base == "cn" || base == "chinese") return Language::zh;
  if (base == "en" || base == "english") return Language::en;
  if (base == "other") return Language::other;
  return std::nullopt;
}

SourceSchema SourceSchema::builtin(SourceKind kind) {
  SourceSchema schema;
  schema.kind = kind;
  schema.name = std::string(to_string(kind));
  return schema;
}

SourceSchema SourceSchema::user_defined(std::string name) {
  SourceSchema schema;
  schema.kind = SourceKind::user_defined;
  schema.name = std::move(name);
  return schema;
}

std::string_view SourceSchema::source_name() const {
  return name.empty() ? to_string(kind) : std::string_view(name);
}

namespace {

[[noreturn]] void fail(Errc code, const std::string& what) { throw Error(code, what); }

std::optional<std::string> optional_string(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(Errc::malformed_record, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::string required_string(const ordered_json& obj, const char* key) {
  auto value = optional_string(obj, key);
  if (!value) fail(Errc::missing_required_field, std::string("missing required field '") + key + "'");
  return *value;
}

void add_field(SourceRecord& record, std::string name, std::string_view raw_value, FieldStyle style) {
  record.fields.push_back(Field{std::move(name), text::normalize_value(raw_value), style});
}

}  // namespace

SourceRecord parse_source_record(std::string_view raw, const SourceSchema& schema) {
  ordered_json obj = ordered_json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (obj.is_discarded()) fail(Errc::malformed_record, "invalid JSON");
  if (!obj.is_object()) fail(Errc::malformed_record, "expected a JSON object");

  SourceRecord record;
  record.kind = schema.kind;
  record.source = std::string(schema.source_name());

  std::optional<std::string> id;
  switch (schema.kind) {
    case SourceKind::product_info:
    case SourceKind::review:
      id = required_string(obj, "id");
      break;
    case SourceKind::article:
    case SourceKind::user_defined:
      id = optional_string(obj, "id");
      break;
    case SourceKind::general_web:
      break;
  }
  if (id) {
    std::string key(text::trim(*id));
    if (!key.empty()) record.entity_key = std::move(key);
  }
  if (schema.linkable() && !record.entity_key) {
    fail(Errc::missing_required_field, "linkable source requires a non-empty 'id'");
  }

  const std::optional<std::string> lang = optional_string(obj, "lang");

  switch (schema.kind) {
    case SourceKind::product_info: {
      if (auto title = optional_string(obj, "title")) add_field(record, "title", *title, FieldStyle::key_value);
      if (auto it = obj.find("properties"); it != obj.end() && !it->is_null()) {
        if (!it->is_object()) fail(Errc::malformed_record, "'properties' must be an object");
        for (const auto& [name, value] : it->items()) {
          if (!value.is_string()) fail(Errc::malformed_record, "property '" + name + "' must be a string");
          add_field(record, std::string(text::trim(name)), value.get<std::string>(), FieldStyle::key_value);
        }
      }
      if (auto desc = optional_string(obj, "description")) {
        add_field(record, "description", *desc, FieldStyle::key_value);
      }
      break;
    }
    case SourceKind::review:
      add_field(record, "text", required_string(obj, "text"), FieldStyle::free_text);
      break;
    case SourceKind::article: {
      if (auto title = optional_string(obj, "title")) add_field(record, "title", *title, FieldStyle::key_value);
      add_field(record, "body", required_string(obj, "body"), FieldStyle::free_text);
      break;
    }
    case SourceKind::general_web:
      add_field(record, "text", required_string(obj, "text"), FieldStyle::free_text);
      break;
    case SourceKind::user_defined:
      for (const auto& [name, value] : obj.items()) {
        if (name == "id" || name == "lang" || value.is_null()) continue;
        if (!value.is_string()) fail(Errc::malformed_record, "field '" + name + "' must be a string");
        add_field(record, name, value.get<std::string>(), FieldStyle::key_value);
      }
      break;
  }

  const bool any_value = std::any_of(record.fields.begin(), record.fields.end(),
                                     [](const Field& f) { return !f.value.empty(); });
  if (!any_value) fail(Errc::empty_record, "all field values are blank");

  const std::string rendered = render_record(record);
  record.estimated_tokens = rendered.size();
  std::optional<Language> declared = lang ? parse_language(*lang) : std::nullopt;
  record.language = declared ? *declared : detect_language(rendered);
  return record;
}

std::string render_record(const SourceRecord& record) {
  std::string out;
  for (const Field& field : record.fields) {
    if (field.value.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    if (field.style == FieldStyle::key_value) {
      out.append(field.name).append(": ");
    }
    out.append(field.value);
  }
  return text::normalize_value(out);
}

Document normalize_to_document(const SourceRecord& record, const Tokenizer& tokenizer) {
  Document doc;
  doc.text = render_record(record);
  doc.source = record.source;
  doc.entity_key = record.entity_key;
  doc.language = record.language;
  doc.token_count = tokenizer.count(doc.text);
  return doc;
}

Language detect_language(std::string_view s, const LanguageThresholds& thresholds) {
  std::size_t cjk = 0;
  std::size_t ascii = 0;
  std::size_t total = 0;
  for (char32_t cp : text::decode_utf8(s)) {
    if (text::is_cjk(cp)) {
      ++cjk;
      ++total;
    } else if (text::is_ascii_letter(cp)) {
      ++ascii;
      ++total;
    } else if (text::is_letter(cp)) {
      ++total;
    }
  }
  if (total == 0) return Language::other;
  const double n = static_cast<double>(total);
  if (static_cast<double>(cjk) / n >= thresholds.min_cjk_ratio) return Language::zh;
  if (static_cast<double>(ascii) / n >= thresholds.min_ascii_ratio) return Language::en;
  return Language::other;
}

IngestResult ingest_lines(const std::vector<std::string>& lines, const SourceSchema& schema,
                          const Tokenizer& tokenizer, std::size_t workers) {
  struct Slot {
    std::optional<Document> doc;
    std::optional<IngestError> error;
  };
  std::vector<Slot> slots(lines.size());
  parallel_for(lines.size(), workers, [&](std::size_t i) {
    try {
      slots[i].doc = normalize_to_document(parse_source_record(lines[i], schema), tokenizer);
    } catch (const Error& e) {
      slots[i].error = IngestError{i + 1, e.code(), e.what()};
    }
  });

  IngestResult result;
  for (Slot& slot : slots) {
    if (slot.doc) {
      result.documents.push_back(std::move(*slot.doc));
    } else {
      result.errors.push_back(std::move(*slot.error));
    }
  }
  return result;
}

}  // namespace corpusmix
