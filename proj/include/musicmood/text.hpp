#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "musicmood/error.hpp"
#include "musicmood/porter.hpp"
#include "musicmood/stopwords.hpp"

namespace musicmood {

struct TokenizerConfig {
  int ngram_lo = 1;
  int ngram_hi = 1;
  bool remove_stopwords = false;
  bool stem = false;

  void validate() const {
    if (ngram_lo < 1 || ngram_lo > 3 || ngram_hi < 1 || ngram_hi > 3) {
      throw UsageError("ngram range must lie within 1..3");
    }
    if (ngram_lo > ngram_hi) throw UsageError("ngram_lo must not exceed ngram_hi");
  }

  friend bool operator==(const TokenizerConfig&, const TokenizerConfig&) = default;
};

// Lowercase terms; n-grams are joined by a single space.
using TokenStream = std::vector<std::string>;

namespace detail {

constexpr bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' || c >= 0x80;
}

}  // namespace detail

// Lowercases ASCII, folds U+2019 (right single quotation mark) to an ASCII
// apostrophe, then splits into maximal runs of letters, digits and
// apostrophes. Leading and trailing apostrophes are stripped from each run.
// Bytes >= 0x80 count as letters so UTF-8 words stay whole.
inline std::vector<std::string> base_tokens(std::string_view text) {
  std::string normalized;
  normalized.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\xE2' && i + 2 < text.size() && text[i + 1] == '\x80' && text[i + 2] == '\x99') {
      normalized.push_back('\'');
      i += 2;
    } else if (c >= 'A' && c <= 'Z') {
      normalized.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      normalized.push_back(c);
    }
  }

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < normalized.size()) {
    if (!detail::is_token_byte(static_cast<unsigned char>(normalized[i]))) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < normalized.size() && detail::is_token_byte(static_cast<unsigned char>(normalized[end]))) ++end;
    std::size_t lo = i;
    std::size_t hi = end;
    while (lo < hi && normalized[lo] == '\'') ++lo;
    while (hi > lo && normalized[hi - 1] == '\'') --hi;
    if (hi > lo) tokens.emplace_back(normalized, lo, hi - lo);
    i = end;
  }
  return tokens;
}

// All n-grams for n = lo..hi, grouped by n in ascending order.
inline TokenStream ngrams(const std::vector<std::string>& sequence, int lo, int hi) {
  TokenStream out;
  const auto length = static_cast<int>(sequence.size());
  for (int n = lo; n <= hi; ++n) {
    for (int start = 0; start + n <= length; ++start) {
      std::string gram = sequence[static_cast<std::size_t>(start)];
      for (int k = 1; k < n; ++k) {
        gram.push_back(' ');
        gram += sequence[static_cast<std::size_t>(start + k)];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

// Fixed pipeline: normalize and split, drop stop words (surface forms),
// stem the survivors, expand to n-grams.
inline TokenStream tokenize(std::string_view text, const TokenizerConfig& cfg, const StopWordSet& stopwords) {
  std::vector<std::string> words = base_tokens(text);
  if (cfg.remove_stopwords) {
    std::erase_if(words, [&](const std::string& w) { return stopwords.contains(w); });
  }
  if (cfg.stem) {
    for (auto& w : words) w = porter_stem(w);
  }
  if (cfg.ngram_lo == 1 && cfg.ngram_hi == 1) return words;
  return ngrams(words, cfg.ngram_lo, cfg.ngram_hi);
}

inline TokenStream tokenize(std::string_view text, const TokenizerConfig& cfg) {
  return tokenize(text, cfg, default_stopwords());
}

}  // namespace musicmood
