#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "musicmood/bayes.hpp"
#include "musicmood/features.hpp"
#include "musicmood/label.hpp"
#include "musicmood/text.hpp"

namespace musicmood {

// Everything needed to go from raw lyrics to a trained model.
struct PipelineConfig {
  TokenizerConfig tokenizer;
  VocabBuildParams vocab;
  NbVariant variant = NbVariant::Multinomial;
  WeightScheme scheme = WeightScheme::TfIdf;
  double alpha = 1.0;
  bool l2_normalize = true;
  SmoothingDenominator smoothing = SmoothingDenominator::TwoOutcome;

  void validate() const {
    tokenizer.validate();
    vocab.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("alpha must be > 0");
    if (!scheme_compatible(variant, scheme)) {
      throw UsageError(std::string("scheme ") + std::string(to_string(scheme)) + " cannot be used with the " +
                       std::string(to_string(variant)) + " model (bernoulli/binary, multinomial/tf, "
                       "multinomial/tfidf)");
    }
  }

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Precomputed state for vectorizing many documents against one vocabulary.
class Featurizer {
 public:
  Featurizer(const Vocabulary& vocab, WeightScheme scheme, bool l2_normalize)
      : vocab_(&vocab), scheme_(scheme), l2_(l2_normalize) {
    if (scheme == WeightScheme::TfIdf) idf_ = idf_weights(vocab);
  }

  explicit Featurizer(const NaiveBayesModel& model)
      : Featurizer(model.vocabulary(), model.scheme(), model.l2_normalize()) {}

  FeatureVector operator()(const TokenStream& tokens) const {
    FeatureVector counts = count_vector(tokens, *vocab_);
    switch (scheme_) {
      case WeightScheme::Binary: return binarize(std::move(counts));
      case WeightScheme::Tf: return counts;
      case WeightScheme::TfIdf: return tfidf_vector(counts, idf_, vocab_->fingerprint(), l2_);
    }
    return counts;
  }

 private:
  const Vocabulary* vocab_;
  WeightScheme scheme_;
  bool l2_;
  std::vector<double> idf_;
};

// Builds the vocabulary from `docs` alone, vectorizes, and fits.
inline NaiveBayesModel train_on_tokens(std::span<const TokenStream> docs, std::span<const MoodLabel> labels,
                                       const PipelineConfig& cfg) {
  cfg.validate();
  Vocabulary vocab = build_vocabulary(docs, cfg.vocab, cfg.tokenizer);
  Featurizer featurize_doc(vocab, cfg.scheme, cfg.l2_normalize);
  std::vector<FeatureVector> X;
  X.reserve(docs.size());
  for (const auto& d : docs) X.push_back(featurize_doc(d));
  const FitOptions options{cfg.smoothing, cfg.l2_normalize};
  if (cfg.variant == NbVariant::Bernoulli) return fit_bernoulli(X, labels, cfg.alpha, vocab, options);
  return fit_multinomial(X, labels, cfg.alpha, vocab, options);
}

inline FeatureVector featurize_lyrics(const NaiveBayesModel& model, std::string_view lyrics) {
  return Featurizer(model)(tokenize(lyrics, model.tokenizer()));
}

inline Posterior predict_lyrics(const NaiveBayesModel& model, std::string_view lyrics) {
  return predict_proba(model, featurize_lyrics(model, lyrics));
}

}  // namespace musicmood
