#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"

using namespace musicmood;

namespace {

std::vector<TokenStream> docs_of(std::initializer_list<TokenStream> docs) { return docs; }

}  // namespace

TEST(BuildVocabulary, DocumentFrequencies) {
  const auto docs = docs_of({{"a", "b"}, {"b"}});
  const auto v = build_vocabulary(docs, {});
  EXPECT_EQ(v.terms(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(v.doc_freq(), (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(v.n_docs(), 2u);
}

TEST(BuildVocabulary, MinDfCountsDocuments) {
  const auto docs = docs_of({{"a", "b"}, {"b"}});
  EXPECT_EQ(build_vocabulary(docs, {std::nullopt, 2}).terms(), std::vector<std::string>{"b"});
  // Three occurrences in one document still make df = 1.
  const auto repeated = docs_of({{"a", "a", "a"}, {"b"}, {"b"}});
  EXPECT_EQ(build_vocabulary(repeated, {std::nullopt, 2}).terms(), std::vector<std::string>{"b"});
}

TEST(BuildVocabulary, MaxFeaturesTieIsLexicographic) {
  const auto docs = docs_of({{"a"}, {"b"}});
  EXPECT_EQ(build_vocabulary(docs, {1, 1}).terms(), std::vector<std::string>{"a"});
}

TEST(BuildVocabulary, MaxFeaturesRanksByTotalCount) {
  const auto docs = docs_of({{"z", "z", "z"}, {"m", "m"}, {"a"}, {"m"}});
  EXPECT_EQ(build_vocabulary(docs, {2, 1}).terms(), (std::vector<std::string>{"m", "z"}));
}

TEST(BuildVocabulary, MinDfAppliesBeforeMaxFeatures) {
  // "z" has the highest count but only one document; with min_df = 2 it is
  // gone before the cap picks the top term.
  const auto docs = docs_of({{"z", "z", "z", "y"}, {"y"}, {"x"}, {"x"}});
  EXPECT_EQ(build_vocabulary(docs, {1, 2}).terms(), std::vector<std::string>{"x"});
}

TEST(BuildVocabulary, Errors) {
  EXPECT_THROW(build_vocabulary(std::vector<TokenStream>{}, {}), DataError);
  const auto docs = docs_of({{"a"}, {"b"}});
  EXPECT_THROW(build_vocabulary(docs, {std::nullopt, 3}), DataError);
  EXPECT_THROW(build_vocabulary(docs, {std::nullopt, 0}), UsageError);
  EXPECT_THROW(build_vocabulary(docs, {0, 1}), UsageError);
}

TEST(BuildVocabulary, SizeEqualsDistinctTokens) {
  Xoshiro256 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TokenStream> docs(1 + rng.below(8));
    std::set<std::string> distinct;
    for (auto& d : docs) {
      for (std::uint64_t k = 0, n = rng.below(10); k < n; ++k) {
        d.push_back("t" + std::to_string(rng.below(15)));
        distinct.insert(d.back());
      }
    }
    if (distinct.empty()) continue;
    const auto v = build_vocabulary(docs, {});
    ASSERT_EQ(v.size(), distinct.size());
    ASSERT_TRUE(std::is_sorted(v.terms().begin(), v.terms().end()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      ASSERT_EQ(v.index_of(v.terms()[i]), i);
      ASSERT_GE(v.doc_freq()[i], 1u);
      ASSERT_LE(v.doc_freq()[i], docs.size());
    }
  }
}

TEST(Vocabulary, RestoreValidatesParts) {
  EXPECT_THROW(Vocabulary({"a", "a"}, {1, 1}, 2, {}, {}), DataError);
  EXPECT_THROW(Vocabulary({"a"}, {3}, 2, {}, {}), DataError);
  EXPECT_THROW(Vocabulary({"a"}, {0}, 2, {}, {}), DataError);
  EXPECT_THROW(Vocabulary({"a", "b"}, {1}, 2, {}, {}), DataError);
}

TEST(Vocabulary, FingerprintCoversConfigAndContent) {
  const Vocabulary base({"a", "b"}, {1, 2}, 2, {}, {});
  EXPECT_EQ(base.fingerprint(), Vocabulary({"a", "b"}, {1, 2}, 2, {}, {}).fingerprint());
  EXPECT_NE(base.fingerprint(), Vocabulary({"a", "b"}, {1, 2}, 2, {1, 1, true, false}, {}).fingerprint());
  EXPECT_NE(base.fingerprint(), Vocabulary({"a", "b"}, {1, 2}, 2, {}, {std::nullopt, 2}).fingerprint());
  EXPECT_NE(base.fingerprint(), Vocabulary({"a", "c"}, {1, 2}, 2, {}, {}).fingerprint());
  EXPECT_NE(base.fingerprint(), Vocabulary({"a", "b"}, {2, 2}, 2, {}, {}).fingerprint());
}

TEST(CountVector, CountsAndIgnoresUnknownTokens) {
  const Vocabulary v({"a", "b"}, {1, 1}, 2, {}, {});
  const auto fv = count_vector({"b", "a", "b", "zzz"}, v);
  EXPECT_EQ(fv.entries, (std::vector<FeatureVector::Entry>{{0, 1.0}, {1, 2.0}}));
  EXPECT_EQ(fv.scheme, WeightScheme::Tf);
  EXPECT_EQ(fv.vocab_fingerprint, v.fingerprint());
  EXPECT_TRUE(count_vector({"x", "y"}, v).empty());
  EXPECT_TRUE(count_vector({}, v).empty());
}

TEST(CountVector, PermutationInvariant) {
  const Vocabulary v({"a", "b", "c", "d"}, {1, 1, 1, 1}, 1, {}, {});
  Xoshiro256 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    TokenStream doc;
    for (std::uint64_t k = 0, n = rng.below(20); k < n; ++k) doc.push_back(std::string(1, char('a' + rng.below(6))));
    TokenStream shuffled = doc;
    shuffle(shuffled, rng);
    ASSERT_EQ(count_vector(doc, v), count_vector(shuffled, v));
  }
}

TEST(Binarize, SetsWeightsToOne) {
  FeatureVector fv{{{0, 3.0}, {4, 1.0}}, WeightScheme::Tf, 7};
  const auto b = binarize(fv);
  EXPECT_EQ(b.entries, (std::vector<FeatureVector::Entry>{{0, 1.0}, {4, 1.0}}));
  EXPECT_EQ(b.scheme, WeightScheme::Binary);
  EXPECT_EQ(binarize(b), b);
  EXPECT_TRUE(binarize(FeatureVector{}).empty());
}

TEST(Idf, SpotValues) {
  const Vocabulary v({"a", "b", "c"}, {1, 3, 2}, 3, {}, {});
  const auto idf = idf_weights(v);
  EXPECT_NEAR(idf[0], std::log(2.0) + 1.0, 1e-12);
  EXPECT_EQ(idf[1], 1.0);
  EXPECT_NEAR(idf[0], 1.693147, 1e-6);
  EXPECT_EQ(idf_weights(Vocabulary({"x"}, {1}, 1, {}, {}))[0], 1.0);
}

TEST(Idf, DecreasesWithDocumentFrequency) {
  std::vector<std::string> terms;
  std::vector<std::uint32_t> df;
  for (std::uint32_t i = 1; i <= 50; ++i) {
    terms.push_back("t" + std::to_string(1000 + i));
    df.push_back(i);
  }
  const auto idf = idf_weights(Vocabulary(terms, df, 50, {}, {}));
  for (std::size_t i = 1; i < idf.size(); ++i) EXPECT_GT(idf[i - 1], idf[i]);
}

TEST(TfIdf, OneTermProduct) {
  const Vocabulary v({"a"}, {1}, 1, {}, {});
  const FeatureVector counts{{{0, 2.0}}, WeightScheme::Tf, v.fingerprint()};
  const auto out = tfidf_vector(counts, std::vector<double>{1.5}, v.fingerprint(), false);
  EXPECT_EQ(out.entries, (std::vector<FeatureVector::Entry>{{0, 3.0}}));
  EXPECT_EQ(out.scheme, WeightScheme::TfIdf);
}

TEST(TfIdf, NormalizedPair) {
  const Vocabulary v({"a", "b"}, {2, 2}, 2, {}, {});
  const FeatureVector counts{{{0, 1.0}, {1, 1.0}}, WeightScheme::Tf, v.fingerprint()};
  const auto out = tfidf_vector(counts, v, true);
  ASSERT_EQ(out.entries.size(), 2u);
  EXPECT_NEAR(out.entries[0].weight, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(out.entries[1].weight, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(tfidf_vector(FeatureVector{{}, WeightScheme::Tf, v.fingerprint()}, v).empty());
}

TEST(TfIdf, UnitNormUnlessEmpty) {
  std::vector<TokenStream> docs;
  Xoshiro256 rng(99);
  for (int d = 0; d < 40; ++d) {
    TokenStream doc;
    for (std::uint64_t k = 0, n = rng.below(30); k < n; ++k) doc.push_back("w" + std::to_string(rng.below(25)));
    docs.push_back(doc);
  }
  const auto v = build_vocabulary(docs, {});
  for (const auto& d : docs) {
    const auto fv = tfidf_vector(count_vector(d, v), v);
    if (fv.empty()) continue;
    double sq = 0.0;
    for (const auto& e : fv.entries) {
      sq += e.weight * e.weight;
      ASSERT_GT(e.weight, 0.0);
    }
    ASSERT_NEAR(std::sqrt(sq), 1.0, 1e-12);
  }
}

TEST(TfIdf, RejectsForeignCounts) {
  const Vocabulary v({"a"}, {1}, 1, {}, {});
  const Vocabulary other({"b"}, {1}, 1, {}, {});
  const FeatureVector counts{{{0, 1.0}}, WeightScheme::Tf, other.fingerprint()};
  EXPECT_THROW(tfidf_vector(counts, v), FingerprintMismatch);
}

TEST(Featurizer, SchemesAgreeWithBuildingBlocks) {
  const auto docs = docs_of({{"a", "b", "b"}, {"b", "c"}, {"c"}});
  const auto v = build_vocabulary(docs, {});
  const TokenStream doc{"b", "c", "b", "q"};
  EXPECT_EQ(Featurizer(v, WeightScheme::Tf, true)(doc), count_vector(doc, v));
  EXPECT_EQ(Featurizer(v, WeightScheme::Binary, true)(doc), binarize(count_vector(doc, v)));
  EXPECT_EQ(Featurizer(v, WeightScheme::TfIdf, false)(doc), tfidf_vector(count_vector(doc, v), v, false));
}
