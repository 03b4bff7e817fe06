#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "musicmood/corpus.hpp"
#include "musicmood/error.hpp"
#include "musicmood/metrics.hpp"
#include "musicmood/pipeline.hpp"
#include "musicmood/validation.hpp"

// Flat `key = value` files. `#` starts a comment, blank lines are ignored,
// keys may appear once. Unknown keys are rejected by name.
namespace musicmood {

class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text, std::string source = "config") {
    KeyValueFile file;
    file.source_ = std::move(source);
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      start = end + 1;
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      const std::string trimmed = detail::trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw UsageError(file.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
      }
      std::string key = detail::trim(std::string_view(trimmed).substr(0, eq));
      std::string value = detail::trim(std::string_view(trimmed).substr(eq + 1));
      if (key.empty()) throw UsageError(file.source_ + ":" + std::to_string(line_no) + ": empty key");
      if (!file.values_.emplace(key, value).second) {
        throw UsageError(file.source_ + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
    return file;
  }

  void reject_unknown(const std::set<std::string>& allowed) const {
    for (const auto& [key, _] : values_) {
      if (!allowed.contains(key)) throw UsageError(source_ + ": unknown key '" + key + "'");
    }
  }

  bool has(const std::string& key) const { return values_.contains(key); }

  const std::string& required(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw UsageError(source_ + ": missing required key '" + key + "'");
    return it->second;
  }

  std::optional<std::string> optional(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

namespace config_detail {

[[noreturn]] inline void bad_value(const std::string& source, const std::string& key, const std::string& value,
                                   const std::string& expected) {
  throw UsageError(source + ": key '" + key + "' has invalid value '" + value + "' (expected " + expected + ")");
}

template <typename Int>
Int parse_int(const std::string& source, const std::string& key, const std::string& value) {
  Int out{};
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) bad_value(source, key, value, "an integer");
  return out;
}

inline double parse_real(const std::string& source, const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) bad_value(source, key, value, "a number");
  return out;
}

inline bool parse_bool(const std::string& source, const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad_value(source, key, value, "true or false");
}

inline std::optional<std::size_t> parse_max_features(const std::string& source, const std::string& key,
                                                     const std::string& value) {
  if (value == "none") return std::nullopt;
  return parse_int<std::size_t>(source, key, value);
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    auto end = value.find(',', start);
    if (end == std::string::npos) end = value.size();
    std::string item = detail::trim(std::string_view(value).substr(start, end - start));
    if (!item.empty()) items.push_back(std::move(item));
    start = end + 1;
  }
  return items;
}

}  // namespace config_detail

// Pipeline plus split and cross-validation settings.
struct RunConfig {
  PipelineConfig pipeline;
  std::uint64_t seed = 0;
  std::size_t folds = 10;
  Objective objective = Objective::F1;
  std::optional<std::size_t> train_count;
  std::optional<std::size_t> validation_count;
  bool balance_validation = true;
};

inline const std::set<std::string>& run_config_keys() {
  static const std::set<std::string> keys{
      "model",    "scheme",         "alpha",       "ngram_lo",  "ngram_hi",        "remove_stopwords",
      "stem",     "max_features",   "min_df",      "l2_normalize", "smoothing_denominator", "seed",
      "folds",    "objective",      "train_count", "validation_count", "balance_validation"};
  return keys;
}

// Required: model, scheme, alpha, ngram_lo, ngram_hi, remove_stopwords, stem,
// min_df. Everything else has a default.
inline RunConfig parse_run_config(std::string_view text, const std::string& source = "config") {
  using namespace config_detail;
  const auto file = KeyValueFile::parse(text, source);
  file.reject_unknown(run_config_keys());

  RunConfig rc;
  auto& p = rc.pipeline;
  const auto& model = file.required("model");
  const auto variant = parse_variant(model);
  if (!variant) bad_value(source, "model", model, "bernoulli or multinomial");
  p.variant = *variant;
  const auto& scheme_text = file.required("scheme");
  const auto scheme = parse_scheme(scheme_text);
  if (!scheme) bad_value(source, "scheme", scheme_text, "binary, tf or tfidf");
  p.scheme = *scheme;
  p.alpha = parse_real(source, "alpha", file.required("alpha"));
  p.tokenizer.ngram_lo = parse_int<int>(source, "ngram_lo", file.required("ngram_lo"));
  p.tokenizer.ngram_hi = parse_int<int>(source, "ngram_hi", file.required("ngram_hi"));
  p.tokenizer.remove_stopwords = parse_bool(source, "remove_stopwords", file.required("remove_stopwords"));
  p.tokenizer.stem = parse_bool(source, "stem", file.required("stem"));
  p.vocab.min_df = parse_int<std::size_t>(source, "min_df", file.required("min_df"));
  if (auto v = file.optional("max_features")) p.vocab.max_features = parse_max_features(source, "max_features", *v);
  if (auto v = file.optional("l2_normalize")) p.l2_normalize = parse_bool(source, "l2_normalize", *v);
  if (auto v = file.optional("smoothing_denominator")) {
    const auto s = parse_smoothing(*v);
    if (!s) bad_value(source, "smoothing_denominator", *v, "two_outcome or vocab_size");
    p.smoothing = *s;
  }
  if (auto v = file.optional("seed")) rc.seed = parse_int<std::uint64_t>(source, "seed", *v);
  if (auto v = file.optional("folds")) rc.folds = parse_int<std::size_t>(source, "folds", *v);
  if (auto v = file.optional("objective")) {
    const auto o = parse_objective(*v);
    if (!o) bad_value(source, "objective", *v, "f1 or roc_auc");
    rc.objective = *o;
  }
  if (auto v = file.optional("train_count")) rc.train_count = parse_int<std::size_t>(source, "train_count", *v);
  if (auto v = file.optional("validation_count")) {
    rc.validation_count = parse_int<std::size_t>(source, "validation_count", *v);
  }
  if (auto v = file.optional("balance_validation")) {
    rc.balance_validation = parse_bool(source, "balance_validation", *v);
  }
  p.validate();
  return rc;
}

inline std::string format_run_config(const RunConfig& rc) {
  const auto& p = rc.pipeline;
  std::string out;
  auto put = [&](std::string_view key, const std::string& value) {
    out += std::string(key) + " = " + value + "\n";
  };
  put("model", std::string(to_string(p.variant)));
  put("scheme", std::string(to_string(p.scheme)));
  put("alpha", format_real(p.alpha));
  put("ngram_lo", std::to_string(p.tokenizer.ngram_lo));
  put("ngram_hi", std::to_string(p.tokenizer.ngram_hi));
  put("remove_stopwords", p.tokenizer.remove_stopwords ? "true" : "false");
  put("stem", p.tokenizer.stem ? "true" : "false");
  put("max_features", format_optional_size(p.vocab.max_features));
  put("min_df", std::to_string(p.vocab.min_df));
  put("l2_normalize", p.l2_normalize ? "true" : "false");
  put("smoothing_denominator", std::string(to_string(p.smoothing)));
  put("seed", std::to_string(rc.seed));
  put("folds", std::to_string(rc.folds));
  put("objective", std::string(to_string(rc.objective)));
  if (rc.train_count) put("train_count", std::to_string(*rc.train_count));
  if (rc.validation_count) put("validation_count", std::to_string(*rc.validation_count));
  put("balance_validation", rc.balance_validation ? "true" : "false");
  return out;
}

inline const std::set<std::string>& grid_spec_keys() {
  static const std::set<std::string> keys{"models", "ngram_ranges", "remove_stopwords", "stem", "max_features",
                                          "min_df", "alpha", "l2_normalize", "smoothing_denominator", "folds",
                                          "seed", "objective"};
  return keys;
}

// List-valued keys take comma-separated values:
//   models = bernoulli/binary, multinomial/tf, multinomial/tfidf
//   ngram_ranges = 1-1, 1-2
//   remove_stopwords = true, false
//   max_features = none, 1000
// Missing axes keep the GridSearchSpec defaults.
inline GridSearchSpec parse_grid_spec(std::string_view text, const std::string& source = "grid") {
  using namespace config_detail;
  const auto file = KeyValueFile::parse(text, source);
  file.reject_unknown(grid_spec_keys());
  GridSearchSpec spec;

  auto list = [&](const std::string& key) {
    auto items = split_list(file.required(key));
    if (items.empty()) throw UsageError(source + ": axis '" + key + "' is empty");
    return items;
  };

  if (file.has("models")) {
    spec.models.clear();
    for (const auto& item : list("models")) {
      const auto slash = item.find('/');
      const auto variant = parse_variant(item.substr(0, slash));
      const auto scheme = slash == std::string::npos ? std::nullopt : parse_scheme(item.substr(slash + 1));
      if (!variant || !scheme || !scheme_compatible(*variant, *scheme)) {
        bad_value(source, "models", item, "bernoulli/binary, multinomial/tf or multinomial/tfidf");
      }
      spec.models.push_back({*variant, *scheme});
    }
  }
  if (file.has("ngram_ranges")) {
    spec.ngram_ranges.clear();
    for (const auto& item : list("ngram_ranges")) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) bad_value(source, "ngram_ranges", item, "lo-hi such as 1-2");
      NgramRange r{parse_int<int>(source, "ngram_ranges", item.substr(0, dash)),
                   parse_int<int>(source, "ngram_ranges", item.substr(dash + 1))};
      TokenizerConfig{r.lo, r.hi, false, false}.validate();
      spec.ngram_ranges.push_back(r);
    }
  }
  if (file.has("remove_stopwords")) {
    spec.remove_stopwords.clear();
    for (const auto& item : list("remove_stopwords")) spec.remove_stopwords.push_back(parse_bool(source, "remove_stopwords", item));
  }
  if (file.has("stem")) {
    spec.stem.clear();
    for (const auto& item : list("stem")) spec.stem.push_back(parse_bool(source, "stem", item));
  }
  if (file.has("max_features")) {
    spec.max_features.clear();
    for (const auto& item : list("max_features")) spec.max_features.push_back(parse_max_features(source, "max_features", item));
  }
  if (file.has("min_df")) {
    spec.min_df.clear();
    for (const auto& item : list("min_df")) spec.min_df.push_back(parse_int<std::size_t>(source, "min_df", item));
  }
  if (file.has("alpha")) {
    spec.alpha.clear();
    for (const auto& item : list("alpha")) spec.alpha.push_back(parse_real(source, "alpha", item));
  }
  if (auto v = file.optional("l2_normalize")) spec.l2_normalize = parse_bool(source, "l2_normalize", *v);
  if (auto v = file.optional("smoothing_denominator")) {
    const auto s = parse_smoothing(*v);
    if (!s) bad_value(source, "smoothing_denominator", *v, "two_outcome or vocab_size");
    spec.smoothing = *s;
  }
  if (auto v = file.optional("folds")) spec.folds = parse_int<std::size_t>(source, "folds", *v);
  if (auto v = file.optional("seed")) spec.seed = parse_int<std::uint64_t>(source, "seed", *v);
  if (auto v = file.optional("objective")) {
    const auto o = parse_objective(*v);
    if (!o) bad_value(source, "objective", *v, "f1 or roc_auc");
    spec.objective = *o;
  }
  spec.validate();
  return spec;
}

// The winning row as a run config that `train` accepts directly.
inline RunConfig run_config_from_grid(const GridSearchSpec& spec, const GridRow& row) {
  RunConfig rc;
  rc.pipeline = row.config;
  rc.seed = spec.seed;
  rc.folds = spec.folds;
  rc.objective = spec.objective;
  return rc;
}

}  // namespace musicmood
