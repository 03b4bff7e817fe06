#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace musicmood;

namespace {

const char* kMinimal =
    "# tuned on the validation split\n"
    "model = multinomial\n"
    "scheme = tfidf\n"
    "alpha = 0.5\n"
    "ngram_lo = 1\n"
    "ngram_hi = 2\n"
    "remove_stopwords = true\n"
    "stem = false\n"
    "min_df = 2\n";

std::string without(const std::string& key) {
  std::string out;
  std::istringstream in(kMinimal);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key + " ", 0) != 0) out += line + "\n";
  }
  return out;
}

template <typename F>
std::string usage_message(F&& f) {
  try {
    f();
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(RunConfig, ParsesMinimalFileWithDefaults) {
  const auto rc = parse_run_config(kMinimal);
  EXPECT_EQ(rc.pipeline.variant, NbVariant::Multinomial);
  EXPECT_EQ(rc.pipeline.scheme, WeightScheme::TfIdf);
  EXPECT_EQ(rc.pipeline.alpha, 0.5);
  EXPECT_EQ(rc.pipeline.tokenizer.ngram_hi, 2);
  EXPECT_TRUE(rc.pipeline.tokenizer.remove_stopwords);
  EXPECT_EQ(rc.pipeline.vocab.min_df, 2u);
  EXPECT_FALSE(rc.pipeline.vocab.max_features.has_value());
  EXPECT_TRUE(rc.pipeline.l2_normalize);
  EXPECT_EQ(rc.folds, 10u);
  EXPECT_EQ(rc.seed, 0u);
  EXPECT_TRUE(rc.balance_validation);
}

TEST(RunConfig, EveryRequiredKeyIsNamedWhenMissing) {
  for (const char* key : {"model", "scheme", "alpha", "ngram_lo", "ngram_hi", "remove_stopwords", "stem", "min_df"}) {
    const auto message = usage_message([&] { parse_run_config(without(key)); });
    EXPECT_NE(message.find(std::string("'") + key + "'"), std::string::npos) << key << ": " << message;
  }
}

TEST(RunConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_NE(usage_message([] { parse_run_config(std::string(kMinimal) + "alpah = 1\n"); }).find("alpah"),
            std::string::npos);
  EXPECT_THROW(parse_run_config(std::string(kMinimal) + "model = svm\n"), UsageError);  // duplicate
  std::string bad = kMinimal;
  bad.replace(bad.find("multinomial"), 11, "svm");
  EXPECT_NE(usage_message([&] { parse_run_config(bad); }).find("svm"), std::string::npos);
  bad = kMinimal;
  bad.replace(bad.find("0.5"), 3, "-1");
  EXPECT_THROW(parse_run_config(bad), UsageError);
  bad = kMinimal;
  bad.replace(bad.find("tfidf"), 5, "binary");
  EXPECT_THROW(parse_run_config(bad), UsageError);
  EXPECT_THROW(parse_run_config("just words\n"), UsageError);
}

TEST(RunConfig, FormatParseRoundTrip) {
  RunConfig rc;
  rc.pipeline.variant = NbVariant::Bernoulli;
  rc.pipeline.scheme = WeightScheme::Binary;
  rc.pipeline.alpha = 0.37;
  rc.pipeline.tokenizer = {1, 3, false, true};
  rc.pipeline.vocab.min_df = 3;
  rc.pipeline.vocab.max_features = 500;
  rc.pipeline.smoothing = SmoothingDenominator::VocabSize;
  rc.seed = 77;
  rc.folds = 4;
  rc.objective = Objective::RocAuc;
  rc.train_count = 1000;
  rc.validation_count = 190;
  rc.balance_validation = false;
  const auto back = parse_run_config(format_run_config(rc));
  EXPECT_EQ(back.pipeline, rc.pipeline);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.folds, 4u);
  EXPECT_EQ(back.objective, Objective::RocAuc);
  EXPECT_EQ(back.train_count, 1000u);
  EXPECT_EQ(back.validation_count, 190u);
  EXPECT_FALSE(back.balance_validation);
  EXPECT_EQ(format_run_config(back), format_run_config(rc));
}

TEST(GridSpec, DefaultsWhenEmpty) {
  const auto spec = parse_grid_spec("");
  EXPECT_EQ(spec.combination_count(), 3u);
  EXPECT_EQ(spec.folds, 10u);
}

TEST(GridSpec, ParsesAxes) {
  const auto spec = parse_grid_spec(
      "models = bernoulli/binary, multinomial/tf\n"
      "ngram_ranges = 1-1, 1-2\n"
      "remove_stopwords = true, false\n"
      "stem = false\n"
      "max_features = none, 1000\n"
      "min_df = 1, 2\n"
      "alpha = 0.1, 1, 10\n"
      "folds = 5\n"
      "seed = 9\n"
      "objective = roc_auc\n");
  EXPECT_EQ(spec.models.size(), 2u);
  EXPECT_EQ(spec.ngram_ranges[1], (NgramRange{1, 2}));
  EXPECT_EQ(spec.max_features[0], std::nullopt);
  EXPECT_EQ(spec.max_features[1], 1000u);
  EXPECT_EQ(spec.alpha, (std::vector<double>{0.1, 1.0, 10.0}));
  EXPECT_EQ(spec.combination_count(), 2u * 2 * 2 * 1 * 2 * 2 * 3);
  EXPECT_EQ(spec.objective, Objective::RocAuc);
  EXPECT_EQ(spec.seed, 9u);
}

TEST(GridSpec, RejectsBadAxes) {
  EXPECT_THROW(parse_grid_spec("models = bernoulli/tfidf\n"), UsageError);
  EXPECT_THROW(parse_grid_spec("models = multinomial\n"), UsageError);
  EXPECT_THROW(parse_grid_spec("ngram_ranges = 2-1\n"), UsageError);
  EXPECT_THROW(parse_grid_spec("ngram_ranges = 12\n"), UsageError);
  EXPECT_THROW(parse_grid_spec("alpha = \n"), UsageError);
  EXPECT_THROW(parse_grid_spec("alpha = 0\n"), UsageError);
  EXPECT_THROW(parse_grid_spec("folds = 1\n"), UsageError);
  EXPECT_THROW(parse_grid_spec("kernel = rbf\n"), UsageError);
}

TEST(GridSpec, BestRowBecomesTrainableConfig) {
  const Corpus c = musicmood::testing::separable_corpus(6);
  const auto spec = parse_grid_spec("models = multinomial/tf\nalpha = 0.5, 2\nfolds = 3\nseed = 4\n");
  const auto result = grid_search(c, spec);
  const auto rc = run_config_from_grid(spec, result.best());
  const auto back = parse_run_config(format_run_config(rc));
  EXPECT_EQ(back.pipeline, result.best().config);
  EXPECT_EQ(back.seed, 4u);
  EXPECT_EQ(back.folds, 3u);
}
