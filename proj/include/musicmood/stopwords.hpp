#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_set>

namespace musicmood {

// Classic 127-word English stop list, version 1. Identical, in order, to
// data/stopwords_en.txt; the file's SHA-256 is kStopwordsSha256 and a unit
// test keeps the two in sync.
inline constexpr std::string_view kStopwordsVersion = "en-127-v1";
inline constexpr std::string_view kStopwordsSha256 =
    "b3f772a000465cb76e23adb03b47073c591c156fad8f7af09c8b8e80d6bd8eac";

inline constexpr std::array<std::string_view, 127> kEnglishStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
    "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it",
    "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which", "who",
    "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be", "been",
    "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and",
    "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before", "after", "above", "below", "to",
    "from", "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then",
    "once", "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few",
    "more", "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
    "than", "too", "very", "s", "t", "can", "will", "just", "don", "should", "now"};

using StopWordSet = std::unordered_set<std::string>;

inline const StopWordSet& default_stopwords() {
  static const StopWordSet words = [] {
    StopWordSet set;
    for (auto w : kEnglishStopwords) set.emplace(w);
    return set;
  }();
  return words;
}

}  // namespace musicmood
