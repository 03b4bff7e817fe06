#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "musicmood/error.hpp"
#include "musicmood/hash.hpp"
#include "musicmood/text.hpp"

namespace musicmood {

enum class WeightScheme : std::uint8_t { Binary, Tf, TfIdf };

constexpr std::string_view to_string(WeightScheme scheme) {
  switch (scheme) {
    case WeightScheme::Binary: return "binary";
    case WeightScheme::Tf: return "tf";
    case WeightScheme::TfIdf: return "tfidf";
  }
  return "?";
}

inline std::optional<WeightScheme> parse_scheme(std::string_view text) {
  if (text == "binary") return WeightScheme::Binary;
  if (text == "tf") return WeightScheme::Tf;
  if (text == "tfidf") return WeightScheme::TfIdf;
  return std::nullopt;
}

// min_df counts documents, not raw occurrences. max_features keeps the k
// terms with the highest total corpus count and is applied after min_df.
struct VocabBuildParams {
  std::optional<std::size_t> max_features;
  std::size_t min_df = 1;

  void validate() const {
    if (min_df < 1) throw UsageError("min_df must be >= 1");
    if (max_features && *max_features < 1) throw UsageError("max_features must be positive");
  }

  friend bool operator==(const VocabBuildParams&, const VocabBuildParams&) = default;
};

// Token -> column mapping with document frequencies, frozen under the
// tokenizer configuration and build parameters that produced it.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Restores a vocabulary from its parts (e.g. a model file). Terms must be
  // unique and every document frequency must lie in [1, n_docs].
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq, std::size_t n_docs,
             TokenizerConfig tokenizer, VocabBuildParams params)
      : terms_(std::move(terms)),
        doc_freq_(std::move(doc_freq)),
        n_docs_(n_docs),
        tokenizer_(tokenizer),
        params_(params) {
    if (terms_.size() != doc_freq_.size()) throw DataError("vocabulary: terms and doc_freq differ in length");
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].empty()) throw DataError("vocabulary: empty term");
      if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second) {
        throw DataError("vocabulary: duplicate term '" + terms_[i] + "'");
      }
      if (doc_freq_[i] < 1 || doc_freq_[i] > n_docs_) {
        throw DataError("vocabulary: document frequency out of range for '" + terms_[i] + "'");
      }
    }
    fingerprint_ = compute_fingerprint();
  }

  std::size_t size() const { return terms_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint32_t>& doc_freq() const { return doc_freq_; }
  const TokenizerConfig& tokenizer() const { return tokenizer_; }
  const VocabBuildParams& params() const { return params_; }

  // Covers the tokenizer configuration, the build parameters and the content.
  std::uint64_t fingerprint() const { return fingerprint_; }

  std::optional<std::uint32_t> index_of(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::uint64_t compute_fingerprint() const {
    std::string header = "tok:" + std::to_string(tokenizer_.ngram_lo) + "," + std::to_string(tokenizer_.ngram_hi) +
                         "," + (tokenizer_.remove_stopwords ? "1" : "0") + "," + (tokenizer_.stem ? "1" : "0") +
                         ";min_df:" + std::to_string(params_.min_df) + ";max:" +
                         (params_.max_features ? std::to_string(*params_.max_features) : "none") +
                         ";n_docs:" + std::to_string(n_docs_) + ";";
    std::uint64_t h = fnv1a64(header);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      h = fnv1a64(terms_[i], h);
      h = fnv1a64(std::string_view("\x1f", 1), h);
      h = fnv1a64(std::to_string(doc_freq_[i]), h);
      h = fnv1a64(std::string_view("\x1e", 1), h);
    }
    return h;
  }

  std::vector<std::string> terms_;
  std::vector<std::uint32_t> doc_freq_;
  std::size_t n_docs_ = 0;
  TokenizerConfig tokenizer_;
  VocabBuildParams params_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t fingerprint_ = 0;
};

// Terms appearing in at least min_df documents; if max_features is set, the
// k most frequent by total count (ties: lexicographically smaller first).
// The surviving terms are stored in lexicographic order.
inline Vocabulary build_vocabulary(std::span<const TokenStream> docs, const VocabBuildParams& params,
                                   const TokenizerConfig& tokenizer = {}) {
  params.validate();
  if (docs.empty()) throw DataError("build_vocabulary: no documents");

  struct Stats {
    std::uint32_t doc_freq = 0;
    std::uint64_t total = 0;
    std::size_t last_doc = static_cast<std::size_t>(-1);
  };
  std::unordered_map<std::string, Stats> stats;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& token : docs[d]) {
      auto& s = stats[token];
      ++s.total;
      if (s.last_doc != d) {
        s.last_doc = d;
        ++s.doc_freq;
      }
    }
  }

  std::vector<std::pair<std::string, Stats>> kept;
  kept.reserve(stats.size());
  for (auto& [term, s] : stats) {
    if (s.doc_freq >= params.min_df) kept.emplace_back(term, s);
  }
  if (kept.empty()) {
    throw DataError("build_vocabulary: no term reaches min_df=" + std::to_string(params.min_df));
  }

  if (params.max_features && kept.size() > *params.max_features) {
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second.total != b.second.total) return a.second.total > b.second.total;
      return a.first < b.first;
    });
    kept.resize(*params.max_features);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::string> terms;
  std::vector<std::uint32_t> doc_freq;
  terms.reserve(kept.size());
  doc_freq.reserve(kept.size());
  for (auto& [term, s] : kept) {
    terms.push_back(std::move(term));
    doc_freq.push_back(s.doc_freq);
  }
  return Vocabulary(std::move(terms), std::move(doc_freq), docs.size(), tokenizer, params);
}

// Sparse document representation. Indices strictly increase and zero
// weights are never stored.
struct FeatureVector {
  struct Entry {
    std::uint32_t index;
    double weight;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> entries;
  WeightScheme scheme = WeightScheme::Tf;
  std::uint64_t vocab_fingerprint = 0;

  bool empty() const { return entries.empty(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Raw occurrence counts (scheme Tf). Tokens outside the vocabulary are
// ignored.
inline FeatureVector count_vector(const TokenStream& doc, const Vocabulary& vocab) {
  std::vector<std::uint32_t> hits;
  hits.reserve(doc.size());
  for (const auto& token : doc) {
    if (auto idx = vocab.index_of(token)) hits.push_back(*idx);
  }
  std::sort(hits.begin(), hits.end());

  FeatureVector fv;
  fv.scheme = WeightScheme::Tf;
  fv.vocab_fingerprint = vocab.fingerprint();
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    fv.entries.push_back({hits[i], static_cast<double>(j - i)});
    i = j;
  }
  return fv;
}

inline FeatureVector binarize(FeatureVector fv) {
  for (auto& e : fv.entries) e.weight = 1.0;
  fv.scheme = WeightScheme::Binary;
  return fv;
}

// idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1
inline std::vector<double> idf_weights(const Vocabulary& vocab) {
  std::vector<double> idf(vocab.size());
  const double n = static_cast<double>(vocab.n_docs());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(vocab.doc_freq()[i]))) + 1.0;
  }
  return idf;
}

// count x idf, optionally scaled to unit Euclidean norm.
inline FeatureVector tfidf_vector(const FeatureVector& counts, const std::vector<double>& idf,
                                  std::uint64_t vocab_fingerprint, bool l2_normalize = true) {
  if (counts.vocab_fingerprint != vocab_fingerprint) {
    throw FingerprintMismatch("tfidf_vector: count vector was built against a different vocabulary");
  }
  if (counts.scheme != WeightScheme::Tf) throw UsageError("tfidf_vector: expects a raw count vector");

  FeatureVector out;
  out.scheme = WeightScheme::TfIdf;
  out.vocab_fingerprint = vocab_fingerprint;
  out.entries.reserve(counts.entries.size());
  double sum_sq = 0.0;
  for (const auto& e : counts.entries) {
    const double w = e.weight * idf.at(e.index);
    if (w == 0.0) continue;
    out.entries.push_back({e.index, w});
    sum_sq += w * w;
  }
  if (l2_normalize && sum_sq > 0.0) {
    const double norm = std::sqrt(sum_sq);
    for (auto& e : out.entries) e.weight /= norm;
  }
  return out;
}

inline FeatureVector tfidf_vector(const FeatureVector& counts, const Vocabulary& vocab, bool l2_normalize = true) {
  return tfidf_vector(counts, idf_weights(vocab), vocab.fingerprint(), l2_normalize);
}

}  // namespace musicmood
