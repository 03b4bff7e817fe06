#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "musicmood/musicmood.hpp"

// Linear-space naive Bayes evaluated straight from raw counts. Shares no code
// with the library's estimators or scorers.
namespace musicmood::testing {

struct CountData {
  std::size_t n_terms = 0;
  std::vector<std::vector<double>> docs;  // docs x terms
  std::vector<MoodLabel> labels;
};

struct LinearNb {
  std::array<double, 2> prior{};
  std::array<std::vector<double>, 2> p;  // P(x_i | class)
};

inline LinearNb oracle_bernoulli(const CountData& data, double alpha, bool vocab_size_denominator = false) {
  LinearNb nb;
  std::array<double, 2> class_docs{};
  std::array<std::vector<double>, 2> df{std::vector<double>(data.n_terms), std::vector<double>(data.n_terms)};
  for (std::size_t d = 0; d < data.docs.size(); ++d) {
    const std::size_t j = data.labels[d] == MoodLabel::Happy ? 0 : 1;
    class_docs[j] += 1.0;
    for (std::size_t i = 0; i < data.n_terms; ++i) {
      if (data.docs[d][i] > 0) df[j][i] += 1.0;
    }
  }
  for (std::size_t j = 0; j < 2; ++j) {
    nb.prior[j] = class_docs[j] / static_cast<double>(data.docs.size());
    const double denom = class_docs[j] + (vocab_size_denominator ? alpha * static_cast<double>(data.n_terms) : 2 * alpha);
    for (std::size_t i = 0; i < data.n_terms; ++i) nb.p[j].push_back((df[j][i] + alpha) / denom);
  }
  return nb;
}

inline LinearNb oracle_multinomial(const CountData& data, double alpha) {
  LinearNb nb;
  std::array<double, 2> class_docs{};
  std::array<std::vector<double>, 2> mass{std::vector<double>(data.n_terms), std::vector<double>(data.n_terms)};
  std::array<double, 2> total{};
  for (std::size_t d = 0; d < data.docs.size(); ++d) {
    const std::size_t j = data.labels[d] == MoodLabel::Happy ? 0 : 1;
    class_docs[j] += 1.0;
    for (std::size_t i = 0; i < data.n_terms; ++i) {
      mass[j][i] += data.docs[d][i];
      total[j] += data.docs[d][i];
    }
  }
  for (std::size_t j = 0; j < 2; ++j) {
    nb.prior[j] = class_docs[j] / static_cast<double>(data.docs.size());
    for (std::size_t i = 0; i < data.n_terms; ++i) {
      nb.p[j].push_back((mass[j][i] + alpha) / (total[j] + alpha * static_cast<double>(data.n_terms)));
    }
  }
  return nb;
}

// prior * prod P^b (1 - P)^(1 - b) over every term.
inline std::array<double, 2> joint_bernoulli(const LinearNb& nb, const std::vector<int>& present) {
  std::array<double, 2> out{};
  for (std::size_t j = 0; j < 2; ++j) {
    double v = nb.prior[j];
    for (std::size_t i = 0; i < present.size(); ++i) v *= present[i] ? nb.p[j][i] : 1.0 - nb.p[j][i];
    out[j] = v;
  }
  return out;
}

// prior * prod P^w over the terms (the multinomial coefficient cancels in
// the posterior and is left out, as in the library's scores).
inline std::array<double, 2> joint_multinomial(const LinearNb& nb, const std::vector<double>& weights) {
  std::array<double, 2> out{};
  for (std::size_t j = 0; j < 2; ++j) {
    double v = nb.prior[j];
    for (std::size_t i = 0; i < weights.size(); ++i) v *= std::pow(nb.p[j][i], weights[i]);
    out[j] = v;
  }
  return out;
}

inline std::array<double, 2> normalize(const std::array<double, 2>& joint) {
  const double total = joint[0] + joint[1];
  return {joint[0] / total, joint[1] / total};
}

// Term i of the test vocabularies is "t<i>", so index order equals
// lexicographic order for up to 10 terms.
inline std::string term_name(std::size_t i) { return "t" + std::to_string(i); }

inline std::vector<TokenStream> as_token_streams(const CountData& data) {
  std::vector<TokenStream> docs;
  for (const auto& row : data.docs) {
    TokenStream d;
    for (std::size_t i = 0; i < row.size(); ++i) {
      for (int c = 0; c < static_cast<int>(row[i]); ++c) d.push_back(term_name(i));
    }
    docs.push_back(d);
  }
  return docs;
}

// Random corpus of `n_docs` documents over `n_terms` terms with both labels
// present and every term used at least once.
inline CountData random_count_data(Xoshiro256& rng, std::size_t n_docs, std::size_t n_terms) {
  for (;;) {
    CountData data;
    data.n_terms = n_terms;
    for (std::size_t d = 0; d < n_docs; ++d) {
      std::vector<double> row(n_terms);
      for (auto& c : row) c = static_cast<double>(rng.below(4));
      data.docs.push_back(row);
      data.labels.push_back(rng.below(2) == 0 ? MoodLabel::Happy : MoodLabel::Sad);
    }
    bool both = false;
    for (auto l : data.labels) both |= l != data.labels.front();
    bool all_used = true;
    for (std::size_t i = 0; i < n_terms; ++i) {
      double col = 0;
      for (const auto& row : data.docs) col += row[i];
      all_used &= col > 0;
    }
    if (both && all_used) return data;
  }
}

inline FeatureVector dense_to_vector(const std::vector<double>& weights, WeightScheme scheme,
                                     std::uint64_t fingerprint) {
  FeatureVector fv;
  fv.scheme = scheme;
  fv.vocab_fingerprint = fingerprint;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] != 0.0) fv.entries.push_back({static_cast<std::uint32_t>(i), weights[i]});
  }
  return fv;
}

// All vectors in {0..max}^n, in odometer order.
inline std::vector<std::vector<double>> all_vectors(std::size_t n, int max) {
  std::vector<std::vector<double>> out;
  std::vector<double> cur(n, 0.0);
  for (;;) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < n && cur[i] == max) cur[i++] = 0.0;
    if (i == n) return out;
    cur[i] += 1.0;
  }
}

}  // namespace musicmood::testing
