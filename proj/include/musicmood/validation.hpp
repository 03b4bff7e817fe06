#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "musicmood/bayes.hpp"
#include "musicmood/corpus.hpp"
#include "musicmood/metrics.hpp"
#include "musicmood/pipeline.hpp"
#include "musicmood/rng.hpp"

namespace musicmood {

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Stratified k-fold. Each class's indices are shuffled with one shared
// Xoshiro256(seed) stream (Happy first, then Sad) and dealt round-robin into
// folds; the Sad deal continues from the fold after the last Happy index so
// fold sizes differ by at most one. Index lists are returned sorted.
inline std::vector<Fold> kfold_indices(std::span<const MoodLabel> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw UsageError("kfold: k must be at least 2");
  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[label_index(labels[i])].push_back(i);
  for (auto label : kLabels) {
    if (by_class[label_index(label)].size() < k) {
      throw DataError("kfold: " + std::to_string(k) + " folds need at least " + std::to_string(k) + " " +
                      std::string(to_string(label)) + " samples, found " +
                      std::to_string(by_class[label_index(label)].size()));
    }
  }
  Xoshiro256 rng(seed);
  std::vector<Fold> folds(k);
  std::size_t next_fold = 0;
  for (auto& members : by_class) {
    shuffle(members, rng);
    for (std::size_t idx : members) {
      folds[next_fold].test.push_back(idx);
      next_fold = (next_fold + 1) % k;
    }
  }
  std::vector<std::size_t> owner(labels.size());
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(folds[f].test.begin(), folds[f].test.end());
    for (std::size_t idx : folds[f].test) owner[idx] = f;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      if (owner[i] != f) folds[f].train.push_back(i);
    }
  }
  return folds;
}

enum class Objective : std::uint8_t { F1, RocAuc };

constexpr std::string_view to_string(Objective o) { return o == Objective::F1 ? "f1" : "roc_auc"; }

inline std::optional<Objective> parse_objective(std::string_view text) {
  if (text == "f1") return Objective::F1;
  if (text == "roc_auc") return Objective::RocAuc;
  return std::nullopt;
}

struct FoldScore {
  double f1 = 0.0;
  double roc_auc = 0.0;
  RocCurve roc;

  double objective(Objective o) const { return o == Objective::F1 ? f1 : roc_auc; }
};

struct CvResult {
  Objective objective = Objective::F1;
  std::vector<FoldScore> folds;
  double mean = 0.0;

  std::vector<double> fold_scores() const {
    std::vector<double> out;
    for (const auto& f : folds) out.push_back(f.objective(objective));
    return out;
  }
};

// Called once per fold with the vocabulary fitted on that fold's training
// part and the held-out indices. Lets callers verify that nothing from the
// held-out documents reaches the fitted pipeline.
using FoldObserver = std::function<void(std::size_t fold, const Vocabulary& vocab, std::span<const std::size_t> test)>;

namespace detail {

inline std::vector<MoodLabel> labels_of(const Corpus& corpus) {
  std::vector<MoodLabel> labels;
  labels.reserve(corpus.size());
  for (const auto& s : corpus.songs) {
    if (!s.label) throw DataError("song at row " + std::to_string(s.row) + " is unlabeled");
    labels.push_back(*s.label);
  }
  return labels;
}

inline std::vector<TokenStream> tokenize_all(const Corpus& corpus, const TokenizerConfig& cfg) {
  std::vector<TokenStream> docs;
  docs.reserve(corpus.size());
  for (const auto& s : corpus.songs) docs.push_back(tokenize(s.lyrics, cfg));
  return docs;
}

// Token streams depend only on the text and the tokenizer, so they can be
// computed once for the whole corpus; everything fitted (vocabulary, idf,
// parameters) is rebuilt from the training part of each fold.
inline CvResult cross_validate_tokens(std::span<const TokenStream> docs, std::span<const MoodLabel> labels,
                                      const PipelineConfig& cfg, const std::vector<Fold>& folds, Objective objective,
                                      const FoldObserver* observer) {
  CvResult result;
  result.objective = objective;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& fold = folds[f];
    std::vector<TokenStream> train_docs;
    std::vector<MoodLabel> train_labels;
    train_docs.reserve(fold.train.size());
    for (std::size_t idx : fold.train) {
      train_docs.push_back(docs[idx]);
      train_labels.push_back(labels[idx]);
    }
    const NaiveBayesModel model = train_on_tokens(train_docs, train_labels, cfg);
    if (observer && *observer) (*observer)(f, model.vocabulary(), fold.test);

    const Featurizer featurize_doc(model);
    std::vector<MoodLabel> truth;
    std::vector<MoodLabel> predicted;
    std::vector<double> scores;
    for (std::size_t idx : fold.test) {
      const auto post = predict_proba(model, featurize_doc(docs[idx]));
      truth.push_back(labels[idx]);
      predicted.push_back(argmax_label(post.log_score));
      scores.push_back(post.p_happy());
    }
    FoldScore score;
    score.f1 = f1(confusion(truth, predicted));
    score.roc = roc_curve(truth, scores);
    score.roc_auc = score.roc.auc;
    result.folds.push_back(std::move(score));
  }
  double total = 0.0;
  for (const auto& s : result.folds) total += s.objective(objective);
  result.mean = total / static_cast<double>(result.folds.size());
  return result;
}

}  // namespace detail

// Fits the entire pipeline, vocabulary included, on each fold's training part
// and scores the held-out part.
inline CvResult cross_validate(const Corpus& corpus, const PipelineConfig& cfg, std::size_t k, std::uint64_t seed,
                               Objective objective, const FoldObserver& observer = {}) {
  cfg.validate();
  const auto labels = detail::labels_of(corpus);
  const auto folds = kfold_indices(labels, k, seed);
  const auto docs = detail::tokenize_all(corpus, cfg.tokenizer);
  return detail::cross_validate_tokens(docs, labels, cfg, folds, objective, &observer);
}

struct ModelKind {
  NbVariant variant;
  WeightScheme scheme;
  friend bool operator==(const ModelKind&, const ModelKind&) = default;
};

inline constexpr std::array<ModelKind, 3> kModelKinds{{{NbVariant::Bernoulli, WeightScheme::Binary},
                                                        {NbVariant::Multinomial, WeightScheme::Tf},
                                                        {NbVariant::Multinomial, WeightScheme::TfIdf}}};

struct NgramRange {
  int lo = 1;
  int hi = 1;
  friend bool operator==(const NgramRange&, const NgramRange&) = default;
};

// Axes of the exhaustive search. Combinations are enumerated with `models`
// outermost, then ngram_ranges, remove_stopwords, stem, max_features,
// min_df, and `alpha` innermost.
struct GridSearchSpec {
  std::vector<ModelKind> models{kModelKinds.begin(), kModelKinds.end()};
  std::vector<NgramRange> ngram_ranges{{1, 1}};
  std::vector<bool> remove_stopwords{true};
  std::vector<bool> stem{false};
  std::vector<std::optional<std::size_t>> max_features{std::nullopt};
  std::vector<std::size_t> min_df{1};
  std::vector<double> alpha{1.0};
  bool l2_normalize = true;
  SmoothingDenominator smoothing = SmoothingDenominator::TwoOutcome;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  Objective objective = Objective::F1;

  std::size_t combination_count() const {
    return models.size() * ngram_ranges.size() * remove_stopwords.size() * stem.size() * max_features.size() *
           min_df.size() * alpha.size();
  }

  void validate() const {
    if (models.empty() || ngram_ranges.empty() || remove_stopwords.empty() || stem.empty() ||
        max_features.empty() || min_df.empty() || alpha.empty()) {
      throw UsageError("grid: every axis needs at least one value");
    }
    if (folds < 2) throw UsageError("grid: folds must be at least 2");
    for (double a : alpha) {
      if (!(a > 0.0) || !std::isfinite(a)) throw UsageError("grid: alpha values must be > 0");
    }
  }

  std::vector<PipelineConfig> enumerate() const {
    validate();
    std::vector<PipelineConfig> out;
    out.reserve(combination_count());
    for (const auto& m : models)
      for (const auto& ng : ngram_ranges)
        for (bool sw : remove_stopwords)
          for (bool st : stem)
            for (const auto& mf : max_features)
              for (std::size_t md : min_df)
                for (double a : alpha) {
                  PipelineConfig cfg;
                  cfg.tokenizer = {ng.lo, ng.hi, sw, st};
                  cfg.vocab = {mf, md};
                  cfg.variant = m.variant;
                  cfg.scheme = m.scheme;
                  cfg.alpha = a;
                  cfg.l2_normalize = l2_normalize;
                  cfg.smoothing = smoothing;
                  cfg.validate();
                  out.push_back(cfg);
                }
    return out;
  }
};

struct GridRow {
  std::size_t index = 0;  // enumeration order
  PipelineConfig config;
  CvResult cv;
  std::size_t rank = 0;  // 1 = best
};

struct GridSearchResult {
  Objective objective = Objective::F1;
  std::vector<GridRow> rows;  // enumeration order

  const GridRow& best() const {
    return *std::find_if(rows.begin(), rows.end(), [](const GridRow& r) { return r.rank == 1; });
  }
};

// Scores every combination by cross-validation on the same folds. Work is
// spread over `jobs` threads; rows are stored by enumeration index and ranked
// by (mean descending, index ascending), so the result does not depend on
// scheduling.
inline GridSearchResult grid_search(const Corpus& corpus, const GridSearchSpec& spec, std::size_t jobs = 1,
                                    const FoldObserver& observer = {}) {
  const auto configs = spec.enumerate();
  const auto labels = detail::labels_of(corpus);
  const auto folds = kfold_indices(labels, spec.folds, spec.seed);

  std::vector<TokenizerConfig> tokenizers;
  for (const auto& c : configs) {
    if (std::find(tokenizers.begin(), tokenizers.end(), c.tokenizer) == tokenizers.end()) {
      tokenizers.push_back(c.tokenizer);
    }
  }
  std::vector<std::vector<TokenStream>> token_cache;
  token_cache.reserve(tokenizers.size());
  for (const auto& t : tokenizers) token_cache.push_back(detail::tokenize_all(corpus, t));
  auto tokens_for = [&](const TokenizerConfig& t) -> const std::vector<TokenStream>& {
    const auto pos = std::find(tokenizers.begin(), tokenizers.end(), t) - tokenizers.begin();
    return token_cache[static_cast<std::size_t>(pos)];
  };

  GridSearchResult result;
  result.objective = spec.objective;
  result.rows.resize(configs.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::mutex observer_mutex;
  FoldObserver serialized_observer;
  if (observer) {
    serialized_observer = [&](std::size_t f, const Vocabulary& v, std::span<const std::size_t> test) {
      std::lock_guard lock(observer_mutex);
      observer(f, v, test);
    };
  }
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        auto& row = result.rows[i];
        row.index = i;
        row.config = configs[i];
        row.cv = detail::cross_validate_tokens(tokens_for(configs[i].tokenizer), labels, configs[i], folds,
                                               spec.objective, &serialized_observer);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, configs.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<std::size_t> order(result.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return result.rows[a].cv.mean > result.rows[b].cv.mean; });
  for (std::size_t r = 0; r < order.size(); ++r) result.rows[order[r]].rank = r + 1;
  return result;
}

inline std::string format_optional_size(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string("none");
}

// One row per (combination, fold) followed by that combination's summary row
// (fold = "mean"), in enumeration order.
inline void write_grid_csv(std::ostream& out, const GridSearchResult& result) {
  out << "combination,model,scheme,ngram_lo,ngram_hi,remove_stopwords,stem,max_features,min_df,alpha,"
         "fold,f1,roc_auc,objective,score,rank\n";
  for (const auto& row : result.rows) {
    const auto& c = row.config;
    const std::string prefix =
        std::to_string(row.index) + "," + std::string(to_string(c.variant)) + "," + std::string(to_string(c.scheme)) +
        "," + std::to_string(c.tokenizer.ngram_lo) + "," + std::to_string(c.tokenizer.ngram_hi) + "," +
        (c.tokenizer.remove_stopwords ? "true" : "false") + "," + (c.tokenizer.stem ? "true" : "false") + "," +
        format_optional_size(c.vocab.max_features) + "," + std::to_string(c.vocab.min_df) + "," +
        format_real(c.alpha) + ",";
    double f1_total = 0.0;
    double auc_total = 0.0;
    for (std::size_t f = 0; f < row.cv.folds.size(); ++f) {
      const auto& fs = row.cv.folds[f];
      f1_total += fs.f1;
      auc_total += fs.roc_auc;
      out << prefix << f << ',' << format_real(fs.f1) << ',' << format_real(fs.roc_auc) << ','
          << to_string(result.objective) << ',' << format_real(fs.objective(result.objective)) << ",\n";
    }
    const auto n = static_cast<double>(row.cv.folds.size());
    out << prefix << "mean," << format_real(f1_total / n) << ',' << format_real(auc_total / n) << ','
        << to_string(result.objective) << ',' << format_real(row.cv.mean) << ',' << row.rank << '\n';
  }
}

struct EvalReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Absent when the evaluated corpus holds only one class.
  std::optional<RocCurve> roc;
  std::vector<Posterior> posteriors;
};

inline EvalReport evaluate_holdout(const NaiveBayesModel& model, const Corpus& corpus) {
  const auto labels = detail::labels_of(corpus);
  if (labels.empty()) throw DataError("evaluate: corpus is empty");
  const Featurizer featurize_doc(model);
  EvalReport report;
  std::vector<MoodLabel> predicted;
  std::vector<double> scores;
  for (const auto& song : corpus.songs) {
    auto post = predict_proba(model, featurize_doc(tokenize(song.lyrics, model.tokenizer())));
    predicted.push_back(argmax_label(post.log_score));
    scores.push_back(post.p_happy());
    report.posteriors.push_back(post);
  }
  report.confusion = confusion(labels, predicted);
  report.accuracy = accuracy(report.confusion);
  report.precision = precision(report.confusion);
  report.recall = recall(report.confusion);
  report.f1 = f1(report.confusion);
  const bool both = std::find(labels.begin(), labels.end(), MoodLabel::Happy) != labels.end() &&
                    std::find(labels.begin(), labels.end(), MoodLabel::Sad) != labels.end();
  if (both) report.roc = roc_curve(labels, scores);
  return report;
}

}  // namespace musicmood
