#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "musicmood/corpus.hpp"
#include "musicmood/error.hpp"
#include "musicmood/porter.hpp"
#include "musicmood/rng.hpp"
#include "musicmood/stopwords.hpp"

// Synthetic labeled lyrics.
//
// Lexicon (fixed, independent of the seed): three disjoint pools of
// pronounceable pseudo-words built from consonant-vowel syllables by
// Xoshiro256(kLexiconSeed): a shared pool, a happy pool and a sad pool. No
// two words in the lexicon share a Porter stem and none is a stop word. The
// shared pool is prefixed by the 127 stop words.
//
// Documents (driven by Xoshiro256(seed), draws in this order per song):
//   label:  happy iff unit() < happy_fraction
//   year:   2019 - floor(60 * u^2), u = unit()  (skewed to recent years)
//   length: min_tokens + below(max_tokens - min_tokens + 1)
//   tokens: each one comes from the song's class pool iff unit() < separation,
//           otherwise from the shared pool; within a pool, words follow a
//           Zipf(1) law over their pool rank, sampled by inverse CDF on unit().
// Lines hold 8 tokens. If every song ends up with the same label, the first
// song is relabeled happy or the last one sad so both classes exist.
//
// separation = 1 gives disjoint class vocabularies; separation = 0 gives
// identical class-conditional distributions.
namespace musicmood {

struct SynthParams {
  std::size_t n_docs = 1000;
  std::uint64_t seed = 0;
  double separation = 0.5;
  double happy_fraction = 0.446;
  std::size_t min_tokens = 40;
  std::size_t max_tokens = 120;
  std::size_t shared_pool = 400;
  std::size_t class_pool = 300;

  void validate() const {
    if (n_docs < 2) throw UsageError("synth: need at least 2 documents");
    if (!(separation >= 0.0 && separation <= 1.0)) throw UsageError("synth: separation must be in [0, 1]");
    if (!(happy_fraction > 0.0 && happy_fraction < 1.0)) throw UsageError("synth: happy_fraction must be in (0, 1)");
    if (min_tokens < 1 || max_tokens < min_tokens) throw UsageError("synth: invalid token length range");
    if (shared_pool < 1 || class_pool < 1) throw UsageError("synth: pools must be non-empty");
  }
};

inline constexpr std::uint64_t kLexiconSeed = 0x6d75736963ULL;

struct SynthLexicon {
  std::vector<std::string> shared;
  std::vector<std::string> happy;
  std::vector<std::string> sad;
};

inline SynthLexicon synth_lexicon(std::size_t shared_size, std::size_t class_size) {
  static constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r",
                                                 "s", "t", "v", "z", "br", "dr", "gl", "pl", "st", "tr"};
  static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  static constexpr std::string_view kCodas[] = {"", "", "", "n", "m", "r", "l", "sh", "k"};

  Xoshiro256 rng(kLexiconSeed);
  std::set<std::string> used_stems;
  std::set<std::string> used_words;
  for (auto w : kEnglishStopwords) {
    used_words.emplace(w);
    used_stems.insert(porter_stem(w));
  }
  auto fresh_word = [&] {
    for (;;) {
      const std::size_t syllables = 2 + static_cast<std::size_t>(rng.below(2));
      std::string word;
      for (std::size_t s = 0; s < syllables; ++s) {
        word += kOnsets[rng.below(std::size(kOnsets))];
        word += kVowels[rng.below(std::size(kVowels))];
      }
      word += kCodas[rng.below(std::size(kCodas))];
      if (used_words.contains(word)) continue;
      const std::string stem = porter_stem(word);
      if (used_stems.contains(stem)) continue;
      used_words.insert(word);
      used_stems.insert(stem);
      return word;
    }
  };

  SynthLexicon lex;
  lex.shared.assign(kEnglishStopwords.begin(), kEnglishStopwords.end());
  for (std::size_t i = 0; i < shared_size; ++i) lex.shared.push_back(fresh_word());
  for (std::size_t i = 0; i < class_size; ++i) lex.happy.push_back(fresh_word());
  for (std::size_t i = 0; i < class_size; ++i) lex.sad.push_back(fresh_word());
  return lex;
}

namespace detail {

class ZipfPool {
 public:
  explicit ZipfPool(const std::vector<std::string>& words) : words_(&words) {
    double total = 0.0;
    cumulative_.reserve(words.size());
    for (std::size_t r = 0; r < words.size(); ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cumulative_.push_back(total);
    }
  }

  const std::string& draw(Xoshiro256& rng) const {
    const double u = rng.unit() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return (*words_)[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  const std::vector<std::string>* words_;
  std::vector<double> cumulative_;
};

}  // namespace detail

inline Corpus generate_synthetic_corpus(const SynthParams& params) {
  params.validate();
  const SynthLexicon lex = synth_lexicon(params.shared_pool, params.class_pool);
  const detail::ZipfPool shared(lex.shared);
  const detail::ZipfPool happy(lex.happy);
  const detail::ZipfPool sad(lex.sad);

  Xoshiro256 rng(params.seed);
  Corpus corpus;
  corpus.name = "synthetic";
  corpus.songs.reserve(params.n_docs);
  for (std::size_t i = 0; i < params.n_docs; ++i) {
    Song song;
    const MoodLabel label = rng.unit() < params.happy_fraction ? MoodLabel::Happy : MoodLabel::Sad;
    const double u = rng.unit();
    song.year = 2019 - static_cast<int>(60.0 * u * u);
    const std::size_t length =
        params.min_tokens + static_cast<std::size_t>(rng.below(params.max_tokens - params.min_tokens + 1));
    const auto& own = label == MoodLabel::Happy ? happy : sad;
    for (std::size_t t = 0; t < length; ++t) {
      const auto& pool = rng.unit() < params.separation ? own : shared;
      if (t > 0) song.lyrics += (t % 8 == 0) ? '\n' : ' ';
      song.lyrics += pool.draw(rng);
    }
    song.label = label;
    song.artist = "Synthetic Artist " + std::to_string(i % 97);
    song.title = "Track " + std::to_string(i + 1);
    song.row = i + 1;
    corpus.songs.push_back(std::move(song));
  }
  const auto has = [&](MoodLabel l) {
    return std::any_of(corpus.songs.begin(), corpus.songs.end(), [&](const Song& s) { return s.label == l; });
  };
  if (!has(MoodLabel::Happy)) corpus.songs.front().label = MoodLabel::Happy;
  if (!has(MoodLabel::Sad)) corpus.songs.back().label = MoodLabel::Sad;
  return corpus;
}

}  // namespace musicmood
