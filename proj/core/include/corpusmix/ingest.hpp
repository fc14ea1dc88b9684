#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpusmix/document.hpp"
#include "corpusmix/error.hpp"
#include "corpusmix/tokenizer.hpp"

namespace corpusmix {

enum class FieldStyle {
  key_value,  // rendered as "name: value"
  free_text,  // rendered verbatim
};

struct Field {
  std::string name;
  std::string value;
  FieldStyle style = FieldStyle::key_value;

  friend bool operator==(const Field&, const Field&) = default;
};

// Describes how one input file is read. Built-in kinds have fixed schemas;
// user_defined sources accept {"id"?, "lang"?, <string fields>...} and treat
// every other string member as a key-value field in source order.
struct SourceSchema {
  SourceKind kind = SourceKind::general_web;
  std::string name;  // defaults to the kind name for built-in kinds

  static SourceSchema builtin(SourceKind kind);
  static SourceSchema user_defined(std::string name);

  std::string_view source_name() const;
  bool linkable() const { return kind == SourceKind::product_info || kind == SourceKind::review; }
};

struct SourceRecord {
  std::string source;
  SourceKind kind = SourceKind::general_web;
  std::optional<std::string> entity_key;
  Language language = Language::other;
  std::vector<Field> fields;
  // UTF-8 byte length of the rendered text; equals the token count under the
  // byte tokenizer.
  std::size_t estimated_tokens = 0;
};

// Parses one JSONL line. Throws Error with malformed_record,
// missing_required_field or empty_record.
SourceRecord parse_source_record(std::string_view raw, const SourceSchema& schema);

// Renders the record as text: key-value fields as "name: value" lines, free
// text verbatim, joined with single newlines. A record with a single
// free-text field renders without its name.
std::string render_record(const SourceRecord& record);

Document normalize_to_document(const SourceRecord& record, const Tokenizer& tokenizer);

struct LanguageThresholds {
  double min_cjk_ratio = 0.30;
  double min_ascii_ratio = 0.70;
};

// Character-class ratio over letters and CJK code points.
Language detect_language(std::string_view text, const LanguageThresholds& thresholds = {});

struct IngestError {
  std::size_t line_no = 0;  // 1-based
  Errc reason = Errc::malformed_record;
  std::string message;
};

struct IngestResult {
  std::vector<Document> documents;
  std::vector<IngestError> errors;
};

// Every input line, blank ones included, yields exactly one document or one
// error.
IngestResult ingest_lines(const std::vector<std::string>& lines, const SourceSchema& schema,
                          const Tokenizer& tokenizer, std::size_t workers = 1);

}  // namespace corpusmix
