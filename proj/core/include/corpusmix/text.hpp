#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 and normalization helpers shared by ingest, quality and eval.
namespace corpusmix::text {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD, one per
// offending byte.
std::vector<char32_t> decode_utf8(std::string_view s);
std::string encode_utf8(const std::vector<char32_t>& cps);
void append_utf8(std::string& out, char32_t cp);

bool is_valid_utf8(std::string_view s);

// Unicode NFC. Returns the input unchanged when it is already normalized.
std::string nfc(std::string_view s);

// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view s);

// Runs of three or more blank lines collapse to a single blank line.
std::string collapse_blank_lines(std::string_view s);

// Strips ASCII and Unicode whitespace from both ends.
std::string_view trim(std::string_view s);

// NFC, newline normalization, blank-line collapse, trim.
std::string normalize_value(std::string_view s);

bool is_cjk(char32_t cp);
bool is_ascii_letter(char32_t cp);
bool is_letter(char32_t cp);
bool is_whitespace(char32_t cp);
bool is_punctuation_or_symbol(char32_t cp);

// Simple Unicode case folding, code point by code point.
std::string casefold(std::string_view s);

std::vector<std::string_view> split_whitespace(std::string_view s);

// Word-level units: whitespace-separated runs, with every CJK code point
// standing as its own unit.
std::vector<std::string> word_units(std::string_view s);

// One unit per code point, whitespace dropped.
std::vector<std::string> char_units(std::string_view s);

}  // namespace corpusmix::text
