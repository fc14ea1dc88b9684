#include "corpusmix/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "corpusmix/error.hpp"

namespace corpusmix::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Returns the decoded code point and advances pos; invalid input yields
// U+FFFD and consumes one byte.
char32_t decode_one(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + len > s.size()) {
    ++pos;
    return kReplacement;
  }
  for (int i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacement;
  }
  pos += len;
  return cp;
}

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(decode_one(s, pos));
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(const std::vector<char32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

bool is_valid_utf8(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t before = pos;
    const char32_t cp = decode_one(s, pos);
    // a literal U+FFFD occupies three bytes; a substituted one consumed one
    if (cp == kReplacement && pos - before == 1) return false;
  }
  return true;
}

std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(Errc::io_error, "ICU NFC normalizer unavailable");
  const icu::UnicodeString src =
      icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  if (normalizer->isNormalized(src, status) && U_SUCCESS(status)) return std::string(s);
  status = U_ZERO_ERROR;
  const icu::UnicodeString dst = normalizer->normalize(src, status);
  if (U_FAILURE(status)) return std::string(s);
  std::string out;
  dst.toUTF8String(out);
  return out;
}

std::string normalize_newlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

namespace {

bool is_blank_line(std::string_view line) { return trim(line).empty(); }

}  // namespace

std::string collapse_blank_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(s.substr(start));
      break;
    }
    lines.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }

  std::string out;
  out.reserve(s.size());
  bool first = true;
  auto emit = [&](std::string_view line) {
    if (!first) out.push_back('\n');
    out.append(line);
    first = false;
  };
  std::size_t i = 0;
  while (i < lines.size()) {
    if (!is_blank_line(lines[i])) {
      emit(lines[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < lines.size() && is_blank_line(lines[j])) ++j;
    if (j - i > 2) {
      emit("");
    } else {
      for (std::size_t k = i; k < j; ++k) emit(lines[k]);
    }
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size()) {
    std::size_t pos = begin;
    if (!is_whitespace(decode_one(s, pos))) break;
    begin = pos;
  }
  std::size_t end = s.size();
  while (end > begin) {
    // step back to the start of the previous code point
    std::size_t cp_start = end - 1;
    while (cp_start > begin && (static_cast<unsigned char>(s[cp_start]) & 0xC0) == 0x80) --cp_start;
    std::size_t pos = cp_start;
    if (!is_whitespace(decode_one(s, pos))) break;
    end = cp_start;
  }
  return s.substr(begin, end - begin);
}

std::string normalize_value(std::string_view s) {
  std::string v = nfc(s);
  v = normalize_newlines(v);
  v = collapse_blank_lines(v);
  return std::string(trim(v));
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) ||    // unified ideographs
         (cp >= 0x3400 && cp <= 0x4DBF) ||    // extension A
         (cp >= 0x20000 && cp <= 0x2EBEF) ||  // extensions B-F
         (cp >= 0x30000 && cp <= 0x3134F) ||  // extension G
         (cp >= 0xF900 && cp <= 0xFAFF) ||    // compatibility ideographs
         (cp >= 0x2F800 && cp <= 0x2FA1F);
}

bool is_ascii_letter(char32_t cp) { return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z'); }

bool is_letter(char32_t cp) { return u_isalpha(static_cast<UChar32>(cp)) != 0; }

bool is_whitespace(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' || cp == '\f' ||
         (cp >= 0x80 && u_isUWhiteSpace(static_cast<UChar32>(cp)));
}

bool is_punctuation_or_symbol(char32_t cp) {
  const auto c = static_cast<UChar32>(cp);
  return u_ispunct(c) || (U_GET_GC_MASK(c) & U_GC_S_MASK) != 0;
}

std::string casefold(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : decode_utf8(s)) {
    append_utf8(out, static_cast<char32_t>(u_foldCase(static_cast<UChar32>(cp), U_FOLD_CASE_DEFAULT)));
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  std::size_t word_start = std::string_view::npos;
  while (pos < s.size()) {
    const std::size_t here = pos;
    const char32_t cp = decode_one(s, pos);
    if (is_whitespace(cp)) {
      if (word_start != std::string_view::npos) {
        out.push_back(s.substr(word_start, here - word_start));
        word_start = std::string_view::npos;
      }
    } else if (word_start == std::string_view::npos) {
      word_start = here;
    }
  }
  if (word_start != std::string_view::npos) out.push_back(s.substr(word_start));
  return out;
}

std::vector<std::string> word_units(std::string_view s) {
  std::vector<std::string> out;
  for (std::string_view word : split_whitespace(s)) {
    std::string pending;
    std::size_t pos = 0;
    while (pos < word.size()) {
      const std::size_t here = pos;
      const char32_t cp = decode_one(word, pos);
      if (is_cjk(cp)) {
        if (!pending.empty()) out.push_back(std::move(pending));
        pending.clear();
        out.emplace_back(word.substr(here, pos - here));
      } else {
        pending.append(word.substr(here, pos - here));
      }
    }
    if (!pending.empty()) out.push_back(std::move(pending));
  }
  return out;
}

std::vector<std::string> char_units(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t here = pos;
    const char32_t cp = decode_one(s, pos);
    if (!is_whitespace(cp)) out.emplace_back(s.substr(here, pos - here));
  }
  return out;
}

}  // namespace corpusmix::text
