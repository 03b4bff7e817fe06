#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "musicmood/error.hpp"
#include "musicmood/features.hpp"
#include "musicmood/label.hpp"

namespace musicmood {

enum class NbVariant : std::uint8_t { Bernoulli, Multinomial };

constexpr std::string_view to_string(NbVariant variant) {
  return variant == NbVariant::Bernoulli ? "bernoulli" : "multinomial";
}

inline std::optional<NbVariant> parse_variant(std::string_view text) {
  if (text == "bernoulli") return NbVariant::Bernoulli;
  if (text == "multinomial") return NbVariant::Multinomial;
  return std::nullopt;
}

// Denominator of the Bernoulli estimate (df_ij + alpha) / (df_j + c):
// TwoOutcome uses c = 2 alpha, VocabSize uses c = alpha * n.
enum class SmoothingDenominator : std::uint8_t { TwoOutcome, VocabSize };

constexpr std::string_view to_string(SmoothingDenominator s) {
  return s == SmoothingDenominator::TwoOutcome ? "two_outcome" : "vocab_size";
}

inline std::optional<SmoothingDenominator> parse_smoothing(std::string_view text) {
  if (text == "two_outcome") return SmoothingDenominator::TwoOutcome;
  if (text == "vocab_size") return SmoothingDenominator::VocabSize;
  return std::nullopt;
}

constexpr bool scheme_compatible(NbVariant variant, WeightScheme scheme) {
  return variant == NbVariant::Bernoulli ? scheme == WeightScheme::Binary : scheme != WeightScheme::Binary;
}

using ClassScores = std::array<double, 2>;

struct Posterior {
  ClassScores log_score{};
  ClassScores probability{};

  double p_happy() const { return probability[label_index(MoodLabel::Happy)]; }
  double p_sad() const { return probability[label_index(MoodLabel::Sad)]; }
};

struct FitOptions {
  SmoothingDenominator smoothing = SmoothingDenominator::TwoOutcome;
  // Recorded in the model so prediction reproduces training featurization.
  bool l2_normalize = true;
};

// Trained classifier. Class order is fixed: index 0 Happy, index 1 Sad. All
// parameters live in natural-log space.
class NaiveBayesModel {
 public:
  struct Parts {
    NbVariant variant = NbVariant::Multinomial;
    WeightScheme scheme = WeightScheme::Tf;
    double alpha = 1.0;
    SmoothingDenominator smoothing = SmoothingDenominator::TwoOutcome;
    bool l2_normalize = true;
    Vocabulary vocabulary;
    ClassScores log_prior{};
    // ln P(x_i | class) per class, per feature.
    std::array<std::vector<double>, 2> log_param;
    // Bernoulli only: ln(1 - P(x_i | class)).
    std::array<std::vector<double>, 2> log_complement;
  };

  explicit NaiveBayesModel(Parts parts) : p_(std::move(parts)) {
    if (!scheme_compatible(p_.variant, p_.scheme)) {
      throw DataError(std::string("model: scheme ") + std::string(to_string(p_.scheme)) +
                      " is not valid for the " + std::string(to_string(p_.variant)) + " variant");
    }
    if (!(p_.alpha > 0.0) || !std::isfinite(p_.alpha)) throw DataError("model: alpha must be positive");
    const std::size_t n = p_.vocabulary.size();
    for (std::size_t j = 0; j < 2; ++j) {
      if (!std::isfinite(p_.log_prior[j])) throw DataError("model: non-finite log prior");
      if (p_.log_param[j].size() != n) throw DataError("model: parameter row length differs from vocabulary size");
      if (p_.variant == NbVariant::Bernoulli && p_.log_complement[j].size() != n) {
        throw DataError("model: complement row length differs from vocabulary size");
      }
    }
    if (p_.variant == NbVariant::Multinomial) {
      p_.log_complement = {};
    }
    for (std::size_t j = 0; j < 2; ++j) {
      for (double v : p_.log_param[j]) {
        if (!std::isfinite(v)) throw DataError("model: non-finite log parameter");
      }
      double absent = p_.log_prior[j];
      for (double v : p_.log_complement[j]) {
        if (!std::isfinite(v)) throw DataError("model: non-finite log complement");
        absent += v;
      }
      bernoulli_base_[j] = absent;
    }
  }

  NbVariant variant() const { return p_.variant; }
  WeightScheme scheme() const { return p_.scheme; }
  double alpha() const { return p_.alpha; }
  SmoothingDenominator smoothing() const { return p_.smoothing; }
  bool l2_normalize() const { return p_.l2_normalize; }
  const Vocabulary& vocabulary() const { return p_.vocabulary; }
  const TokenizerConfig& tokenizer() const { return p_.vocabulary.tokenizer(); }
  const ClassScores& log_prior() const { return p_.log_prior; }
  const std::array<std::vector<double>, 2>& log_param() const { return p_.log_param; }
  const std::array<std::vector<double>, 2>& log_complement() const { return p_.log_complement; }

  // Bernoulli: log prior plus the contribution of a document with no
  // features present.
  const ClassScores& bernoulli_base() const { return bernoulli_base_; }

 private:
  Parts p_;
  ClassScores bernoulli_base_{};
};

namespace detail {

struct ClassCounts {
  std::array<std::size_t, 2> docs{};
};

inline ClassCounts check_training_input(std::span<const FeatureVector> X, std::span<const MoodLabel> y,
                                        double alpha, const Vocabulary& vocab) {
  if (X.size() != y.size()) throw UsageError("fit: feature and label counts differ");
  if (X.empty()) throw DataError("fit: no training documents");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("fit: alpha must be > 0");
  ClassCounts counts;
  for (auto label : y) ++counts.docs[label_index(label)];
  if (counts.docs[0] == 0 || counts.docs[1] == 0) {
    throw DataError("fit: both happy and sad training documents are required");
  }
  for (const auto& fv : X) {
    if (fv.vocab_fingerprint != vocab.fingerprint()) {
      throw FingerprintMismatch("fit: feature vector built against a different vocabulary");
    }
  }
  return counts;
}

inline ClassScores log_priors(const ClassCounts& counts) {
  const double total = static_cast<double>(counts.docs[0] + counts.docs[1]);
  return {std::log(static_cast<double>(counts.docs[0]) / total),
          std::log(static_cast<double>(counts.docs[1]) / total)};
}

}  // namespace detail

// P(x_i | class j) = (df_ij + alpha) / (df_j + 2 alpha), or with the
// VocabSize denominator (df_j + alpha * n). df_ij counts class-j documents
// containing feature i; df_j counts class-j documents.
inline NaiveBayesModel fit_bernoulli(std::span<const FeatureVector> X, std::span<const MoodLabel> y, double alpha,
                                     const Vocabulary& vocab, const FitOptions& options = {}) {
  const auto counts = detail::check_training_input(X, y, alpha, vocab);
  const std::size_t n = vocab.size();
  std::array<std::vector<double>, 2> df{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t d = 0; d < X.size(); ++d) {
    if (X[d].scheme != WeightScheme::Binary) throw UsageError("fit_bernoulli: expects binary feature vectors");
    auto& row = df[label_index(y[d])];
    for (const auto& e : X[d].entries) row[e.index] += 1.0;
  }

  NaiveBayesModel::Parts parts;
  parts.variant = NbVariant::Bernoulli;
  parts.scheme = WeightScheme::Binary;
  parts.alpha = alpha;
  parts.smoothing = options.smoothing;
  parts.l2_normalize = options.l2_normalize;
  parts.vocabulary = vocab;
  parts.log_prior = detail::log_priors(counts);
  for (std::size_t j = 0; j < 2; ++j) {
    const double class_docs = static_cast<double>(counts.docs[j]);
    const double denom = class_docs + (options.smoothing == SmoothingDenominator::TwoOutcome
                                           ? 2.0 * alpha
                                           : alpha * static_cast<double>(n));
    parts.log_param[j].resize(n);
    parts.log_complement[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double num = df[j][i] + alpha;
      if (num >= denom) {
        throw DataError("fit_bernoulli: smoothed estimate reaches 1 for term '" + vocab.terms()[i] +
                        "'; use the two_outcome denominator");
      }
      parts.log_param[j][i] = std::log(num) - std::log(denom);
      parts.log_complement[j][i] = std::log(denom - num) - std::log(denom);
    }
  }
  return NaiveBayesModel(std::move(parts));
}

// P(x_i | class j) = (sum of weights of feature i over class-j documents + alpha)
//                    / (sum of all weights over class-j documents + alpha * n).
// Fractional tf-idf weights are summed as they are.
inline NaiveBayesModel fit_multinomial(std::span<const FeatureVector> X, std::span<const MoodLabel> y, double alpha,
                                       const Vocabulary& vocab, const FitOptions& options = {}) {
  const auto counts = detail::check_training_input(X, y, alpha, vocab);
  const std::size_t n = vocab.size();
  const WeightScheme scheme = X.front().scheme;
  if (scheme == WeightScheme::Binary) throw UsageError("fit_multinomial: expects tf or tf-idf feature vectors");

  std::array<std::vector<double>, 2> mass{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t d = 0; d < X.size(); ++d) {
    if (X[d].scheme != scheme) throw UsageError("fit_multinomial: mixed weighting schemes");
    auto& row = mass[label_index(y[d])];
    for (const auto& e : X[d].entries) {
      if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
        throw DataError("fit_multinomial: feature weights must be finite and non-negative");
      }
      row[e.index] += e.weight;
    }
  }

  NaiveBayesModel::Parts parts;
  parts.variant = NbVariant::Multinomial;
  parts.scheme = scheme;
  parts.alpha = alpha;
  parts.smoothing = options.smoothing;
  parts.l2_normalize = options.l2_normalize;
  parts.vocabulary = vocab;
  parts.log_prior = detail::log_priors(counts);
  for (std::size_t j = 0; j < 2; ++j) {
    double total = 0.0;
    for (double w : mass[j]) total += w;
    const double log_denom = std::log(total + alpha * static_cast<double>(n));
    parts.log_param[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) parts.log_param[j][i] = std::log(mass[j][i] + alpha) - log_denom;
  }
  return NaiveBayesModel(std::move(parts));
}

// Unnormalized log P(x | class) + log P(class).
//
// Bernoulli sums over every vocabulary feature: present features contribute
// ln P, absent ones ln(1 - P). This is evaluated as the all-absent baseline
// plus (ln P - ln(1 - P)) for the present features.
// Multinomial sums weight_i * ln P over the stored entries only.
inline ClassScores log_posterior(const NaiveBayesModel& model, const FeatureVector& x) {
  if (x.vocab_fingerprint != model.vocabulary().fingerprint()) {
    throw FingerprintMismatch("log_posterior: feature vector built against a different vocabulary");
  }
  if (!scheme_compatible(model.variant(), x.scheme)) {
    throw UsageError(std::string("log_posterior: ") + std::string(to_string(x.scheme)) +
                     " features cannot be scored by a " + std::string(to_string(model.variant())) + " model");
  }
  ClassScores scores{};
  if (model.variant() == NbVariant::Bernoulli) {
    scores = model.bernoulli_base();
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& lp = model.log_param()[j];
      const auto& lc = model.log_complement()[j];
      for (const auto& e : x.entries) scores[j] += lp[e.index] - lc[e.index];
    }
  } else {
    scores = model.log_prior();
    for (std::size_t j = 0; j < 2; ++j) {
      const auto& lp = model.log_param()[j];
      for (const auto& e : x.entries) scores[j] += e.weight * lp[e.index];
    }
  }
  return scores;
}

// Argmax; an exact tie goes to Happy.
inline MoodLabel argmax_label(const ClassScores& scores) {
  return scores[label_index(MoodLabel::Sad)] > scores[label_index(MoodLabel::Happy)] ? MoodLabel::Sad
                                                                                      : MoodLabel::Happy;
}

// Normalizes log scores with log-sum-exp.
inline Posterior posterior_from_scores(const ClassScores& scores) {
  Posterior post;
  post.log_score = scores;
  const double top = std::max(scores[0], scores[1]);
  const double e0 = std::exp(scores[0] - top);
  const double e1 = std::exp(scores[1] - top);
  const double total = e0 + e1;
  post.probability = {e0 / total, e1 / total};
  return post;
}

inline MoodLabel predict(const NaiveBayesModel& model, const FeatureVector& x) {
  return argmax_label(log_posterior(model, x));
}

inline Posterior predict_proba(const NaiveBayesModel& model, const FeatureVector& x) {
  return posterior_from_scores(log_posterior(model, x));
}

}  // namespace musicmood
