#pragma once

// Independent reference implementations used only by tests. None of these
// call into the code path they check.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace corpusmix::oracle {

// Full-table LCS dynamic program.
inline std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        t[i][j] = t[i - 1][j - 1] + 1;
      } else {
        t[i][j] = std::max(t[i - 1][j], t[i][j - 1]);
      }
    }
  }
  return t[a.size()][b.size()];
}

inline std::vector<std::string> split_spaces(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Prf {
  double p, r, f;
};

inline Prf rouge_l_tokens(const std::string& cand, const std::string& ref) {
  const auto c = split_spaces(cand);
  const auto r = split_spaces(ref);
  const double l = static_cast<double>(lcs(c, r));
  const double p = c.empty() ? 0.0 : l / static_cast<double>(c.size());
  const double rc = l / static_cast<double>(r.size());
  const double f = (p + rc) > 0 ? 2 * p * rc / (p + rc) : 0.0;
  return {p, rc, f};
}

// Maximum distinct-source count over every subset of `sources` whose size
// lies in [lo, hi]. Enumerates all 2^n subsets (n <= 20).
inline std::size_t max_distinct_sources(const std::vector<int>& sources, std::size_t lo, std::size_t hi) {
  const std::size_t n = sources.size();
  const std::uint32_t full = n == 0 ? 0 : ((1u << n) - 1);
  std::vector<std::uint32_t> src_mask(std::size_t{1} << n, 0);
  std::size_t best = 0;
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    const int low = std::countr_zero(s);
    src_mask[s] = src_mask[s & (s - 1)] | (1u << sources[low]);
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if (size >= lo && size <= hi) best = std::max(best, static_cast<std::size_t>(std::popcount(src_mask[s])));
    if (s == full) break;
  }
  return best;
}

// Set of space-joined k-word windows.
inline std::set<std::string> word_shingles(const std::string& text, std::size_t k) {
  const auto words = split_spaces(text);
  std::set<std::string> out;
  for (std::size_t i = 0; i + k <= words.size(); ++i) {
    std::string s;
    for (std::size_t j = 0; j < k; ++j) s += words[i + j] + " ";
    out.insert(s);
  }
  return out;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Regex-based normalization of one rendered value: CRLF/CR -> LF, 3+ blank
// lines -> 1, trim. ASCII input only (NFC is the identity there).
inline std::string normalize_ascii(const std::string& s) {
  std::string v = std::regex_replace(s, std::regex("\r\n"), "\n");
  v = std::regex_replace(v, std::regex("\r"), "\n");
  // a blank line is whitespace-only; 3+ of them between content collapse
  v = std::regex_replace(v, std::regex("\n([ \t]*\n){3,}"), "\n\n");
  const auto b = v.find_first_not_of(" \t\n\v\f");
  if (b == std::string::npos) return "";
  const auto e = v.find_last_not_of(" \t\n\v\f");
  return v.substr(b, e - b + 1);
}

// Sliding-window n-gram recount with BOS padding encoded as -1.
inline std::map<std::vector<long long>, std::uint64_t> ngram_counts(const std::vector<std::vector<std::uint32_t>>& corpus,
                                                                   std::size_t n) {
  std::map<std::vector<long long>, std::uint64_t> out;
  for (const auto& seq : corpus) {
    std::vector<long long> padded(n - 1, -1);
    for (auto t : seq) padded.push_back(t);
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      ++out[std::vector<long long>(padded.begin() + static_cast<long>(i), padded.begin() + static_cast<long>(i + n))];
    }
  }
  return out;
}

struct ParsedPrompt {
  std::vector<std::pair<std::string, std::string>> demos;
  std::string query;
  bool ok = false;
};

// Splits a prompt rendered with the default Input/Output template. Texts must
// not contain blank lines.
inline ParsedPrompt split_prompt(const std::string& prompt) {
  ParsedPrompt out;
  std::vector<std::string> blocks;
  std::size_t start = 0;
  for (std::size_t at; (at = prompt.find("\n\n", start)) != std::string::npos; start = at + 2) {
    blocks.push_back(prompt.substr(start, at - start));
  }
  blocks.push_back(prompt.substr(start));
  const std::regex demo("^Input: ([\\s\\S]*)\nOutput: ([\\s\\S]*)$");
  const std::regex query("^Input: ([\\s\\S]*)\nOutput:$");
  std::smatch m;
  for (std::size_t i = 0; i + 1 < blocks.size(); ++i) {
    if (!std::regex_match(blocks[i], m, demo)) return out;
    out.demos.emplace_back(m[1], m[2]);
  }
  if (!std::regex_match(blocks.back(), m, query)) return out;
  out.query = m[1];
  out.ok = true;
  return out;
}

}  // namespace corpusmix::oracle
