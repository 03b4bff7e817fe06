#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "musicmood/csv.hpp"
#include "musicmood/error.hpp"
#include "musicmood/io.hpp"
#include "musicmood/label.hpp"
#include "musicmood/rng.hpp"
#include "musicmood/text.hpp"

namespace musicmood {

struct Song {
  std::string artist;
  std::string title;
  std::optional<int> year;
  std::string lyrics;
  std::optional<MoodLabel> label;
  // 1-based data row in the source file; 0 when the song was not loaded.
  std::size_t row = 0;

  friend bool operator==(const Song&, const Song&) = default;
};

struct Corpus {
  std::vector<Song> songs;
  std::string name;
  std::optional<std::string> source_path;
  // Rows whose (artist, title) pair already appeared earlier in the file.
  // They are kept, only counted.
  std::size_t duplicate_rows = 0;

  std::size_t size() const { return songs.size(); }
  bool empty() const { return songs.empty(); }
};

inline constexpr std::string_view kCorpusHeader = "artist,title,year,lyrics,mood";

namespace detail {

inline bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace detail

// Parses corpus CSV text. `name` labels the corpus in reports.
inline Corpus parse_corpus(std::string_view text, std::string name = "corpus") {
  if (!detail::valid_utf8(text)) throw DataError(name + ": corpus is not valid UTF-8");
  const auto rows = csv::parse(text);
  if (rows.empty()) throw DataError(name + ": missing header");
  const csv::Row expected{"artist", "title", "year", "lyrics", "mood"};
  if (rows.front() != expected) {
    throw DataError(name + ": malformed header, expected exactly '" + std::string(kCorpusHeader) + "'");
  }

  Corpus corpus;
  corpus.name = std::move(name);
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = corpus.name + ": row " + std::to_string(r);
    if (row.size() != 5) {
      throw DataError(where + ": expected 5 fields, found " + std::to_string(row.size()));
    }
    Song song;
    song.artist = row[0];
    song.title = row[1];
    song.lyrics = row[3];
    song.row = r;
    if (detail::trim(song.lyrics).empty()) throw DataError(where + ": empty lyrics");

    const std::string year = detail::trim(row[2]);
    if (!year.empty()) {
      int value = 0;
      const auto [end, ec] = std::from_chars(year.data(), year.data() + year.size(), value);
      if (ec != std::errc() || end != year.data() + year.size()) {
        throw DataError(where + ": year '" + year + "' is not an integer");
      }
      if (value < 1000 || value > 3000) throw DataError(where + ": year " + year + " outside [1000, 3000]");
      song.year = value;
    }

    const std::string mood = detail::trim(row[4]);
    if (!mood.empty()) {
      song.label = parse_label(mood);
      if (!song.label) throw DataError(where + ": unknown mood '" + mood + "' (expected happy or sad)");
    }
    if (!seen.emplace(song.artist, song.title).second) ++corpus.duplicate_rows;
    corpus.songs.push_back(std::move(song));
  }
  return corpus;
}

inline Corpus load_corpus(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw DataError("corpus file not found: " + path.string());
  Corpus corpus = parse_corpus(read_file(path), path.filename().string());
  corpus.source_path = path.string();
  return corpus;
}

inline std::string format_corpus_csv(const Corpus& corpus) {
  std::string out = std::string(kCorpusHeader) + "\n";
  for (const auto& s : corpus.songs) {
    out += csv::format_row({s.artist, s.title, s.year ? std::to_string(*s.year) : std::string(), s.lyrics,
                            s.label ? std::string(to_string(*s.label)) : std::string()});
  }
  return out;
}

inline void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  write_file(path, format_corpus_csv(corpus));
}

// One lowercase word per line; blank lines are skipped.
inline std::unordered_set<std::string> load_wordlist(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::unordered_set<std::string> words;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string word = detail::trim(std::string_view(text).substr(start, end - start));
    if (!word.empty()) words.insert(std::move(word));
    start = end + 1;
  }
  if (words.empty()) throw DataError("word list is empty: " + path.string());
  return words;
}

namespace detail {

constexpr bool is_alpha_byte(unsigned char c) { return (c >= 'a' && c <= 'z') || c >= 0x80; }

// Whitespace-split, lowercased tokens with leading/trailing punctuation
// removed, keeping only tokens that contain a letter.
inline std::vector<std::string> language_tokens(std::string_view lyrics) {
  std::vector<std::string> out;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  auto is_punct = [](unsigned char c) { return c < 0x80 && std::ispunct(c); };
  while (i < lyrics.size()) {
    while (i < lyrics.size() && is_space(lyrics[i])) ++i;
    std::size_t end = i;
    while (end < lyrics.size() && !is_space(lyrics[end])) ++end;
    std::size_t lo = i;
    std::size_t hi = end;
    while (lo < hi && is_punct(static_cast<unsigned char>(lyrics[lo]))) ++lo;
    while (hi > lo && is_punct(static_cast<unsigned char>(lyrics[hi - 1]))) --hi;
    std::string token;
    bool has_letter = false;
    for (std::size_t k = lo; k < hi; ++k) {
      char c = lyrics[k];
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      has_letter = has_letter || is_alpha_byte(static_cast<unsigned char>(c));
      token.push_back(c);
    }
    if (has_letter) out.push_back(std::move(token));
    i = end;
  }
  return out;
}

}  // namespace detail

// Fraction of a song's tokens found in `dictionary`.
inline std::optional<double> english_fraction(std::string_view lyrics,
                                              const std::unordered_set<std::string>& dictionary) {
  const auto tokens = detail::language_tokens(lyrics);
  if (tokens.empty()) return std::nullopt;
  std::size_t hits = 0;
  for (const auto& t : tokens) hits += dictionary.contains(t) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

// Keeps a song iff its dictionary fraction is strictly above `threshold`.
// Songs with no tokens are dropped. Order is preserved.
inline Corpus filter_english(const Corpus& corpus, const std::unordered_set<std::string>& dictionary,
                             double threshold = 0.5) {
  if (dictionary.empty()) throw UsageError("filter_english: dictionary is empty");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("filter_english: threshold must be in (0, 1]");
  Corpus out;
  out.name = corpus.name;
  out.source_path = corpus.source_path;
  for (const auto& song : corpus.songs) {
    const auto fraction = english_fraction(song.lyrics, dictionary);
    if (fraction && *fraction > threshold) out.songs.push_back(song);
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& s : out.songs) {
    if (!seen.emplace(s.artist, s.title).second) ++out.duplicate_rows;
  }
  return out;
}

struct SplitSpec {
  std::size_t train_count = 0;
  std::size_t validation_count = 0;
  std::uint64_t seed = 0;
  bool balance_validation = false;
};

struct SplitResult {
  Corpus train;
  Corpus validation;
};

// Shuffles song positions with Xoshiro256(seed). Unbalanced: validation takes
// the first validation_count shuffled songs, train the next train_count.
// Balanced: validation takes the first validation_count/2 happy and the first
// validation_count/2 sad songs in shuffled order; train then takes the first
// train_count of the remaining songs in shuffled order.
inline SplitResult split(const Corpus& corpus, const SplitSpec& spec) {
  if (spec.train_count == 0 || spec.validation_count == 0) {
    throw UsageError("split: train and validation counts must be positive");
  }
  if (spec.train_count + spec.validation_count > corpus.size()) {
    throw DataError("split: " + std::to_string(spec.train_count) + " + " + std::to_string(spec.validation_count) +
                    " songs requested but the corpus has " + std::to_string(corpus.size()));
  }
  std::array<std::size_t, 2> per_class{};
  for (const auto& s : corpus.songs) {
    if (!s.label) throw DataError("split: song at row " + std::to_string(s.row) + " is unlabeled");
    ++per_class[label_index(*s.label)];
  }
  if (spec.balance_validation) {
    if (spec.validation_count % 2 != 0) throw UsageError("split: balanced validation needs an even count");
    const std::size_t half = spec.validation_count / 2;
    for (auto label : kLabels) {
      if (per_class[label_index(label)] < half) {
        throw DataError("split: balanced validation needs " + std::to_string(half) + " " +
                        std::string(to_string(label)) + " songs, corpus has " +
                        std::to_string(per_class[label_index(label)]));
      }
    }
  }

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Xoshiro256 rng(spec.seed);
  shuffle(order, rng);

  std::vector<bool> taken(corpus.size(), false);
  SplitResult result;
  result.train.name = corpus.name + ":train";
  result.validation.name = corpus.name + ":validation";
  result.train.source_path = result.validation.source_path = corpus.source_path;

  if (spec.balance_validation) {
    const std::size_t half = spec.validation_count / 2;
    std::array<std::size_t, 2> picked{};
    for (std::size_t pos : order) {
      auto& count = picked[label_index(*corpus.songs[pos].label)];
      if (count < half) {
        ++count;
        taken[pos] = true;
        result.validation.songs.push_back(corpus.songs[pos]);
      }
    }
  } else {
    for (std::size_t k = 0; k < spec.validation_count; ++k) {
      taken[order[k]] = true;
      result.validation.songs.push_back(corpus.songs[order[k]]);
    }
  }
  for (std::size_t pos : order) {
    if (result.train.songs.size() == spec.train_count) break;
    if (!taken[pos]) result.train.songs.push_back(corpus.songs[pos]);
  }
  return result;
}

struct LabelCount {
  MoodLabel label;
  std::size_t count = 0;
  std::optional<double> fraction;  // empty when the corpus has no labels
};

struct LabelDistribution {
  std::array<LabelCount, 2> per_label{LabelCount{MoodLabel::Happy, 0, std::nullopt}, LabelCount{MoodLabel::Sad, 0, std::nullopt}};
  std::size_t labeled = 0;
  std::size_t unlabeled = 0;

  const LabelCount& operator[](MoodLabel label) const { return per_label[label_index(label)]; }
};

inline LabelDistribution label_distribution(const Corpus& corpus) {
  LabelDistribution dist;
  for (const auto& s : corpus.songs) {
    if (s.label) {
      ++dist.per_label[label_index(*s.label)].count;
      ++dist.labeled;
    } else {
      ++dist.unlabeled;
    }
  }
  if (dist.labeled > 0) {
    for (auto& entry : dist.per_label) {
      entry.fraction = static_cast<double>(entry.count) / static_cast<double>(dist.labeled);
    }
  }
  return dist;
}

struct DecadeBucket {
  std::optional<int> decade;  // empty for songs without a year
  std::size_t songs = 0;      // includes unlabeled songs
  std::size_t happy = 0;
  std::size_t sad = 0;
  std::optional<double> sad_fraction;  // sad / (happy + sad), empty if neither
};

// Ascending decades, then the "unknown" bucket if any song lacks a year.
inline std::vector<DecadeBucket> decade_distribution(const Corpus& corpus) {
  std::map<int, DecadeBucket> known;
  DecadeBucket unknown;
  for (const auto& s : corpus.songs) {
    DecadeBucket* bucket = &unknown;
    if (s.year) {
      const int decade = *s.year - (*s.year % 10);
      bucket = &known[decade];
      bucket->decade = decade;
    }
    ++bucket->songs;
    if (s.label == MoodLabel::Happy) ++bucket->happy;
    if (s.label == MoodLabel::Sad) ++bucket->sad;
  }
  std::vector<DecadeBucket> out;
  for (auto& [_, b] : known) out.push_back(b);
  if (unknown.songs > 0) out.push_back(unknown);
  for (auto& b : out) {
    if (b.happy + b.sad > 0) b.sad_fraction = static_cast<double>(b.sad) / static_cast<double>(b.happy + b.sad);
  }
  return out;
}

struct TermCount {
  std::string term;
  std::size_t count = 0;
  friend bool operator==(const TermCount&, const TermCount&) = default;
};

// Most frequent terms across the lyrics of one label; ties ascending
// lexicographically.
inline std::vector<TermCount> top_terms(const Corpus& corpus, MoodLabel label, std::size_t k,
                                        const TokenizerConfig& cfg) {
  if (k == 0) throw UsageError("top_terms: k must be positive");
  cfg.validate();
  std::unordered_map<std::string, std::size_t> counts;
  bool any = false;
  for (const auto& s : corpus.songs) {
    if (s.label != label) continue;
    any = true;
    for (auto& t : tokenize(s.lyrics, cfg)) ++counts[t];
  }
  if (!any) throw DataError("top_terms: no " + std::string(to_string(label)) + " songs in corpus");
  std::vector<TermCount> ranked;
  ranked.reserve(counts.size());
  for (auto& [term, count] : counts) ranked.push_back({term, count});
  const auto keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [](const TermCount& a, const TermCount& b) {
                      if (a.count != b.count) return a.count > b.count;
                      return a.term < b.term;
                    });
  ranked.resize(keep);
  return ranked;
}

}  // namespace musicmood
