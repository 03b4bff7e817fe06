#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "test_support.hpp"

using namespace musicmood;
using namespace musicmood::testing;

namespace {

std::vector<MoodLabel> labels_with(std::size_t happy, std::size_t sad) {
  std::vector<MoodLabel> out(happy, MoodLabel::Happy);
  out.insert(out.end(), sad, MoodLabel::Sad);
  return out;
}

Corpus synthetic(std::size_t n, std::uint64_t seed, double separation) {
  SynthParams p;
  p.n_docs = n;
  p.seed = seed;
  p.separation = separation;
  return generate_synthetic_corpus(p);
}

PipelineConfig config(NbVariant variant, WeightScheme scheme, double alpha = 1.0) {
  PipelineConfig cfg;
  cfg.variant = variant;
  cfg.scheme = scheme;
  cfg.alpha = alpha;
  cfg.tokenizer.remove_stopwords = true;
  return cfg;
}

}  // namespace

TEST(KFold, StratifiedFoldsOfTen) {
  const auto labels = labels_with(5, 5);
  const auto folds = kfold_indices(labels, 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  for (const auto& f : folds) {
    ASSERT_EQ(f.test.size(), 2u);
    EXPECT_NE(labels[f.test[0]], labels[f.test[1]]);
  }
}

TEST(KFold, PartitionProperties) {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng.below(9);
    const std::size_t happy = k + rng.below(40);
    const std::size_t sad = k + rng.below(40);
    auto labels = labels_with(happy, sad);
    shuffle(labels, rng);
    const auto folds = kfold_indices(labels, k, rng.next());
    std::vector<int> seen(labels.size(), 0);
    for (const auto& f : folds) {
      ASSERT_EQ(f.train.size() + f.test.size(), labels.size());
      ASSERT_TRUE(std::is_sorted(f.test.begin(), f.test.end()));
      std::size_t h = 0;
      for (auto i : f.test) {
        ++seen[i];
        h += labels[i] == MoodLabel::Happy;
      }
      std::set<std::size_t> test(f.test.begin(), f.test.end());
      for (auto i : f.train) ASSERT_FALSE(test.contains(i));
      // Within one sample of the global per-fold share.
      ASSERT_LE(std::abs(static_cast<double>(h) - static_cast<double>(happy) / static_cast<double>(k)), 1.0);
    }
    for (int s : seen) ASSERT_EQ(s, 1);
  }
}

TEST(KFold, DeterministicAndChecked) {
  const auto labels = labels_with(7, 9);
  const auto a = kfold_indices(labels, 3, 42);
  const auto b = kfold_indices(labels, 3, 42);
  for (std::size_t f = 0; f < 3; ++f) EXPECT_EQ(a[f].test, b[f].test);
  EXPECT_THROW(kfold_indices(labels, 1, 0), UsageError);
  EXPECT_THROW(kfold_indices(labels_with(2, 9), 3, 0), DataError);
}

TEST(CrossValidate, SeparableCorpusScoresPerfectly) {
  const Corpus c = separable_corpus(10);
  for (const auto& [variant, scheme] : kModelKinds) {
    const auto cv = cross_validate(c, config(variant, scheme), 5, 1, Objective::F1);
    EXPECT_EQ(cv.folds.size(), 5u);
    EXPECT_EQ(cv.mean, 1.0);
  }
}

TEST(CrossValidate, DisjointSyntheticVocabulariesScorePerfectly) {
  const Corpus c = synthetic(300, 8, 1.0);
  for (const auto& [variant, scheme] : kModelKinds) {
    EXPECT_EQ(cross_validate(c, config(variant, scheme), 10, 8, Objective::F1).mean, 1.0);
  }
}

TEST(CrossValidate, ShuffledLabelsGiveChanceAuc) {
  Corpus c = synthetic(400, 3, 0.8);
  std::vector<MoodLabel> labels = labels_with(200, 200);
  Xoshiro256 rng(12);
  shuffle(labels, rng);
  for (std::size_t i = 0; i < c.size(); ++i) c.songs[i].label = labels[i];
  const auto cv = cross_validate(c, config(NbVariant::Multinomial, WeightScheme::TfIdf), 10, 4, Objective::RocAuc);
  EXPECT_GE(cv.mean, 0.35);
  EXPECT_LE(cv.mean, 0.65);
}

TEST(CrossValidate, TwoFoldsOnFourSamples) {
  Corpus c;
  c.songs = {make_song("sun sun", MoodLabel::Happy), make_song("rain rain", MoodLabel::Sad),
             make_song("sun smile", MoodLabel::Happy), make_song("rain cold", MoodLabel::Sad)};
  const auto cv = cross_validate(c, config(NbVariant::Multinomial, WeightScheme::Tf), 2, 0, Objective::F1);
  EXPECT_EQ(cv.folds.size(), 2u);
  EXPECT_EQ(cv.fold_scores().size(), 2u);
}

TEST(CrossValidate, HeldOutSentinelsNeverReachTheVocabulary) {
  Xoshiro256 rng(100);
  for (int trial = 0; trial < 20; ++trial) {
    Corpus c = synthetic(60 + rng.below(60), rng.next(), rng.unit());
    for (std::size_t i = 0; i < c.size(); ++i) c.songs[i].lyrics += " sentinel" + std::to_string(i);
    std::size_t checked = 0;
    const FoldObserver observer = [&](std::size_t, const Vocabulary& vocab, std::span<const std::size_t> test) {
      for (std::size_t idx : test) {
        ASSERT_FALSE(vocab.index_of("sentinel" + std::to_string(idx)).has_value());
      }
      // Training documents' sentinels are in, so the check is not vacuous.
      std::set<std::size_t> held(test.begin(), test.end());
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!held.contains(i)) ASSERT_TRUE(vocab.index_of("sentinel" + std::to_string(i)).has_value());
      }
      ASSERT_EQ(vocab.n_docs(), c.size() - test.size());
      ++checked;
    };
    cross_validate(c, config(NbVariant::Bernoulli, WeightScheme::Binary), 5, rng.next(), Objective::F1, observer);
    EXPECT_EQ(checked, 5u);
  }
}

TEST(GridSearch, SinglePointEqualsCrossValidation) {
  const Corpus c = synthetic(150, 2, 0.3);
  GridSearchSpec spec;
  spec.models = {{NbVariant::Multinomial, WeightScheme::Tf}};
  spec.folds = 5;
  spec.seed = 9;
  const auto result = grid_search(c, spec);
  ASSERT_EQ(result.rows.size(), 1u);
  const auto cv = cross_validate(c, result.rows[0].config, 5, 9, Objective::F1);
  EXPECT_EQ(result.rows[0].cv.mean, cv.mean);
  EXPECT_EQ(result.rows[0].cv.fold_scores(), cv.fold_scores());
  EXPECT_EQ(result.best().index, 0u);
}

TEST(GridSearch, AlphaAxisRanksByMean) {
  const Corpus c = synthetic(200, 5, 0.15);
  GridSearchSpec spec;
  spec.models = {{NbVariant::Multinomial, WeightScheme::TfIdf}};
  spec.alpha = {0.1, 1.0, 10.0};
  spec.folds = 5;
  const auto result = grid_search(c, spec);
  ASSERT_EQ(result.rows.size(), 3u);
  for (const auto& row : result.rows) {
    double total = 0.0;
    for (double s : row.cv.fold_scores()) total += s;
    EXPECT_NEAR(row.cv.mean, total / 5.0, 1e-15);
  }
  double best = -1.0;
  for (const auto& row : result.rows) best = std::max(best, row.cv.mean);
  EXPECT_EQ(result.best().cv.mean, best);
  std::set<std::size_t> ranks;
  for (const auto& row : result.rows) ranks.insert(row.rank);
  EXPECT_EQ(ranks, (std::set<std::size_t>{1, 2, 3}));
}

TEST(GridSearch, TiesGoToEarlierCombinations) {
  const Corpus c = separable_corpus(10);
  GridSearchSpec spec;
  spec.alpha = {0.5, 1.0};
  spec.folds = 5;
  const auto result = grid_search(c, spec);
  ASSERT_EQ(result.rows.size(), 6u);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    EXPECT_EQ(result.rows[i].cv.mean, 1.0);
    EXPECT_EQ(result.rows[i].rank, i + 1);
  }
}

TEST(GridSearch, RowCountIsProductOfAxes) {
  GridSearchSpec spec;
  spec.ngram_ranges = {{1, 1}, {1, 2}};
  spec.remove_stopwords = {true, false};
  spec.stem = {false, true};
  spec.max_features = {std::nullopt, 50};
  spec.min_df = {1, 2};
  spec.alpha = {0.5, 1.0, 2.0};
  EXPECT_EQ(spec.combination_count(), 3u * 2 * 2 * 2 * 2 * 2 * 3);
  const auto configs = spec.enumerate();
  ASSERT_EQ(configs.size(), spec.combination_count());
  // alpha varies fastest, models slowest
  EXPECT_EQ(configs[0].alpha, 0.5);
  EXPECT_EQ(configs[1].alpha, 1.0);
  EXPECT_EQ(configs[0].variant, NbVariant::Bernoulli);
  EXPECT_EQ(configs.back().scheme, WeightScheme::TfIdf);
  spec.alpha.clear();
  EXPECT_THROW(spec.validate(), UsageError);
}

TEST(GridSearch, ThreadCountDoesNotChangeResults) {
  const Corpus c = synthetic(160, 6, 0.2);
  GridSearchSpec spec;
  spec.alpha = {0.1, 1.0};
  spec.remove_stopwords = {true, false};
  spec.folds = 4;
  std::ostringstream one;
  std::ostringstream four;
  write_grid_csv(one, grid_search(c, spec, 1));
  write_grid_csv(four, grid_search(c, spec, 4));
  EXPECT_EQ(one.str(), four.str());
}

TEST(GridSearch, CsvLayout) {
  const Corpus c = separable_corpus(6);
  GridSearchSpec spec;
  spec.models = {{NbVariant::Bernoulli, WeightScheme::Binary}};
  spec.folds = 3;
  std::ostringstream out;
  write_grid_csv(out, grid_search(c, spec));
  std::istringstream lines(out.str());
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0],
            "combination,model,scheme,ngram_lo,ngram_hi,remove_stopwords,stem,max_features,min_df,alpha,fold,f1,"
            "roc_auc,objective,score,rank");
  EXPECT_EQ(rows[1], "0,bernoulli,binary,1,1,true,false,none,1,1,0,1,1,f1,1,");
  EXPECT_EQ(rows[4], "0,bernoulli,binary,1,1,true,false,none,1,1,mean,1,1,f1,1,1");
}

TEST(EvaluateHoldout, SeparableSelfEvaluation) {
  const Corpus c = separable_corpus(5);
  const auto model = train_on_tokens(detail::tokenize_all(c, {}), detail::labels_of(c),
                                     config(NbVariant::Multinomial, WeightScheme::Tf));
  const auto report = evaluate_holdout(model, c);
  EXPECT_EQ(report.precision, 1.0);
  EXPECT_EQ(report.recall, 1.0);
  ASSERT_TRUE(report.roc.has_value());
  EXPECT_EQ(report.roc->auc, 1.0);
  EXPECT_EQ(report.posteriors.size(), c.size());
}

TEST(EvaluateHoldout, EmptyLyricsFallBackToPriors) {
  Corpus train = separable_corpus(5);
  train.songs.push_back(make_song("tears", MoodLabel::Sad));
  const auto cfg = config(NbVariant::Multinomial, WeightScheme::Tf);
  const auto model = train_on_tokens(detail::tokenize_all(train, cfg.tokenizer), detail::labels_of(train), cfg);
  Corpus holdout;
  holdout.songs = {make_song("", MoodLabel::Happy), make_song("sunshine dance", MoodLabel::Happy)};
  const auto report = evaluate_holdout(model, holdout);
  EXPECT_EQ(report.confusion.total(), 2u);
  EXPECT_NEAR(report.posteriors[0].p_sad(), 6.0 / 11.0, 1e-12);
  EXPECT_EQ(report.confusion.fn, 1u);
  EXPECT_FALSE(report.roc.has_value());
}

TEST(EvaluateHoldout, MetricsFollowFromConfusion) {
  const Corpus c = synthetic(300, 14, 0.1);
  const auto cfg = config(NbVariant::Bernoulli, WeightScheme::Binary);
  const Corpus half{{c.songs.begin(), c.songs.begin() + 150}, "a", {}, 0};
  const Corpus rest{{c.songs.begin() + 150, c.songs.end()}, "b", {}, 0};
  const auto model = train_on_tokens(detail::tokenize_all(half, cfg.tokenizer), detail::labels_of(half), cfg);
  const auto r = evaluate_holdout(model, rest);
  EXPECT_EQ(r.accuracy, accuracy(r.confusion));
  EXPECT_EQ(r.precision, precision(r.confusion));
  EXPECT_EQ(r.recall, recall(r.confusion));
  EXPECT_EQ(r.f1, f1(r.confusion));
  EXPECT_EQ(r.confusion.total(), rest.size());
}

TEST(EvaluateHoldout, UnlabeledSongsAreAnError) {
  const Corpus c = separable_corpus(3);
  const auto model = train_on_tokens(detail::tokenize_all(c, {}), detail::labels_of(c),
                                     config(NbVariant::Multinomial, WeightScheme::Tf));
  Corpus unlabeled = c;
  unlabeled.songs[1].label.reset();
  EXPECT_THROW(evaluate_holdout(model, unlabeled), DataError);
}
