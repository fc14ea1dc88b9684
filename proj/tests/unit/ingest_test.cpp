#include <gtest/gtest.h>

#include <cctype>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corpusmix/hashing.hpp"
#include "corpusmix/ingest.hpp"
#include "oracles.hpp"

using namespace corpusmix;

namespace {

const ByteTokenizer kTok;

SourceRecord parse(const std::string& raw, SourceKind kind) {
  return parse_source_record(raw, SourceSchema::builtin(kind));
}

Errc error_of(const std::string& raw, SourceKind kind) {
  try {
    parse(raw, kind);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << raw;
  return Errc::io_error;
}

}  // namespace

TEST(ParseSourceRecord, ProductInfoKeepsFieldOrder) {
  auto rec = parse(R"({"id":"P1","title":"red shoes","properties":{"color":"red"}})", SourceKind::product_info);
  ASSERT_EQ(rec.fields.size(), 2u);
  EXPECT_EQ(rec.fields[0].name, "title");
  EXPECT_EQ(rec.fields[1].name, "color");
  EXPECT_EQ(rec.entity_key, "P1");
  EXPECT_EQ(rec.source, "product_info");
}

TEST(ParseSourceRecord, PropertyOrderFollowsRawObject) {
  auto rec = parse(R"({"id":"P9","properties":{"zeta":"1","alpha":"2","mid":"3"}})", SourceKind::product_info);
  ASSERT_EQ(rec.fields.size(), 3u);
  EXPECT_EQ(rec.fields[0].name, "zeta");
  EXPECT_EQ(rec.fields[1].name, "alpha");
  EXPECT_EQ(rec.fields[2].name, "mid");
}

TEST(ParseSourceRecord, EmptyReviewIsEmptyRecord) {
  EXPECT_EQ(error_of(R"({"id":"P1","text":""})", SourceKind::review), Errc::empty_record);
  EXPECT_EQ(error_of(R"({"id":"P1","text":"  \n "})", SourceKind::review), Errc::empty_record);
}

TEST(ParseSourceRecord, GeneralWebHasNoKey) {
  nlohmann::json j{{"text", std::string(500, 'x')}};
  auto rec = parse(j.dump(), SourceKind::general_web);
  EXPECT_FALSE(rec.entity_key.has_value());
  EXPECT_EQ(rec.source, "general_web");
  EXPECT_EQ(rec.estimated_tokens, 500u);
}

TEST(ParseSourceRecord, Errors) {
  EXPECT_EQ(error_of("{not json", SourceKind::review), Errc::malformed_record);
  EXPECT_EQ(error_of("[1,2]", SourceKind::review), Errc::malformed_record);
  EXPECT_EQ(error_of(R"({"text":"fine"})", SourceKind::review), Errc::missing_required_field);
  EXPECT_EQ(error_of(R"({"id":"  ","text":"fine"})", SourceKind::review), Errc::missing_required_field);
  EXPECT_EQ(error_of(R"({"id":"P1","text":5})", SourceKind::review), Errc::malformed_record);
  EXPECT_EQ(error_of(R"({"title":"t"})", SourceKind::article), Errc::missing_required_field);
}

TEST(ParseSourceRecord, UserDefinedSchema) {
  auto rec = parse_source_record(R"({"id":"Q7","question":"size?","answer":"fits large"})",
                                 SourceSchema::user_defined("qa"));
  EXPECT_EQ(rec.source, "qa");
  EXPECT_EQ(rec.entity_key, "Q7");
  EXPECT_EQ(render_record(rec), "question: size?\nanswer: fits large");
}

TEST(NormalizeToDocument, KeyValueRendering) {
  auto rec = parse(R"({"id":"P1","title":"red shoes","properties":{"color":"red"}})", SourceKind::product_info);
  auto doc = normalize_to_document(rec, kTok);
  EXPECT_EQ(doc.text, "title: red shoes\ncolor: red");
  EXPECT_EQ(doc.token_count, doc.text.size());
  EXPECT_EQ(doc.entity_key, "P1");
}

TEST(NormalizeToDocument, SingleFreeTextFieldHasNoPrefix) {
  auto doc = normalize_to_document(parse(R"({"id":"P1","text":"great!"})", SourceKind::review), kTok);
  EXPECT_EQ(doc.text, "great!");
}

TEST(NormalizeToDocument, NfcComposes) {
  auto doc = normalize_to_document(parse(R"({"text":"cafe\u0301 au lait"})", SourceKind::general_web), kTok);
  EXPECT_EQ(doc.text, "caf\xC3\xA9 au lait");
}

TEST(NormalizeToDocument, MatchesRegexNormalizationOnRandomRecords) {
  const std::vector<std::string> pieces = {"word", "x", " ", "\t", "\r\n", "\r", "\n", "\n\n\n\n", " \r\n\t\r\n"};
  Rng rng(42);
  for (int r = 0; r < 100; ++r) {
    std::string value = "w";
    const auto n = 1 + rng.below(30);
    for (std::uint64_t i = 0; i < n; ++i) value += pieces[rng.below(pieces.size())];
    nlohmann::json j{{"text", value}};
    auto doc = normalize_to_document(parse(j.dump(), SourceKind::general_web), kTok);
    EXPECT_EQ(doc.text, oracle::normalize_ascii(value)) << j.dump();
    EXPECT_EQ(doc.text.find('\r'), std::string::npos);
  }
}

TEST(NormalizeToDocument, Idempotent) {
  Rng rng(7);
  const std::vector<std::string> pieces = {"ab", " ", "\r\n", "\n\n\n", "\xE7\xBA\xA2", "e\xCC\x81", "\t"};
  for (int r = 0; r < 200; ++r) {
    std::string value = "z";
    for (int i = 0; i < 20; ++i) value += pieces[rng.below(pieces.size())];
    nlohmann::json j{{"text", value}};
    auto once = normalize_to_document(parse(j.dump(), SourceKind::general_web), kTok);
    nlohmann::json again{{"text", once.text}};
    auto twice = normalize_to_document(parse(again.dump(), SourceKind::general_web), kTok);
    EXPECT_EQ(once.text, twice.text);
  }
}

TEST(DetectLanguage, PureScripts) {
  EXPECT_EQ(detect_language("\xE7\xBA\xA2\xE8\x89\xB2\xE8\xBF\x90\xE5\x8A\xA8\xE9\x9E\x8B"), Language::zh);
  EXPECT_EQ(detect_language("red running shoes"), Language::en);
  EXPECT_EQ(detect_language("12345 !!!"), Language::other);
}

TEST(DetectLanguage, MixedStringFollowsHandCount) {
  const std::string s = "model X-100 \xE5\x9E\x8B\xE5\x8F\xB7";
  // ASCII letters by byte; CJK here are the 3-byte sequences led by 0xE4..0xE9.
  double ascii = 0, cjk = 0;
  for (unsigned char c : s) {
    if (std::isalpha(c)) ++ascii;
    if (c >= 0xE4 && c <= 0xE9) ++cjk;
  }
  ASSERT_EQ(ascii, 6);
  ASSERT_EQ(cjk, 2);
  const Language expected = cjk / (ascii + cjk) >= 0.30   ? Language::zh
                            : ascii / (ascii + cjk) >= 0.70 ? Language::en
                                                            : Language::other;
  EXPECT_EQ(detect_language(s), expected);
  EXPECT_EQ(expected, Language::en);
}

TEST(ParseSourceRecord, DeclaredLanguageWins) {
  auto rec = parse(R"({"id":"P1","text":"red shoes","lang":"zh-CN"})", SourceKind::review);
  EXPECT_EQ(rec.language, Language::zh);
}

TEST(IngestLines, EveryLineAccountedFor) {
  const std::vector<std::string> lines = {
      R"({"id":"P1","text":"good"})", "", R"({"id":"P2","text":""})", "garbage", R"({"id":"P3","text":"ok"})",
  };
  auto res = ingest_lines(lines, SourceSchema::builtin(SourceKind::review), kTok, 3);
  EXPECT_EQ(res.documents.size() + res.errors.size(), lines.size());
  ASSERT_EQ(res.documents.size(), 2u);
  EXPECT_EQ(res.documents[0].entity_key, "P1");
  EXPECT_EQ(res.documents[1].entity_key, "P3");
  ASSERT_EQ(res.errors.size(), 3u);
  EXPECT_EQ(res.errors[0].line_no, 2u);
  EXPECT_EQ(res.errors[1].line_no, 3u);
  EXPECT_EQ(res.errors[1].reason, Errc::empty_record);
  EXPECT_EQ(res.errors[2].line_no, 4u);
  EXPECT_EQ(res.errors[2].reason, Errc::malformed_record);
}

TEST(IngestLines, DeterministicAcrossWorkers) {
  std::vector<std::string> lines;
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    nlohmann::json j{{"id", "P" + std::to_string(rng.below(40))}, {"text", "review number " + std::to_string(i)}};
    lines.push_back(i % 17 == 0 ? std::string("{") : j.dump());
  }
  const auto schema = SourceSchema::builtin(SourceKind::review);
  auto a = ingest_lines(lines, schema, kTok, 1);
  auto b = ingest_lines(lines, schema, kTok, 8);
  EXPECT_EQ(a.documents, b.documents);
  ASSERT_EQ(a.errors.size(), b.errors.size());
  for (std::size_t i = 0; i < a.errors.size(); ++i) EXPECT_EQ(a.errors[i].line_no, b.errors[i].line_no);
}
