#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "musicmood/bayes.hpp"
#include "musicmood/error.hpp"
#include "musicmood/hash.hpp"
#include "musicmood/io.hpp"
#include "musicmood/stopwords.hpp"

// Model file: a JSON document
//
//   { "format": "musicmood-naive-bayes",
//     "format_version": 1,
//     "payload": { ...model... },
//     "payload_sha256": "<hex>" }
//
// Reals are written as decimals with 17 significant digits, so every double
// survives the round trip bit for bit. The checksum is the SHA-256 of the
// payload's compact canonical serialization (sorted keys, shortest
// round-trip numbers), which is recomputed from the parsed payload on load.
namespace musicmood {

inline constexpr std::string_view kModelFormat = "musicmood-naive-bayes";
inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline void emit_json(const nlohmann::json& value, std::string& out, int depth) {
  auto indent = [&](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
  switch (value.type()) {
    case nlohmann::json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ",\n";
        first = false;
        indent(depth + 1);
        out += nlohmann::json(key).dump();
        out += ": ";
        emit_json(item, out, depth + 1);
      }
      out += "\n";
      indent(depth);
      out += "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      // Arrays of scalars stay on one line; nested arrays get one row per line.
      const bool nested = !value.empty() && value.front().is_structured();
      out += "[";
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += nested ? "," : ", ";
        first = false;
        if (nested) {
          out += "\n";
          indent(depth + 1);
        }
        emit_json(item, out, depth + 1);
      }
      if (nested) {
        out += "\n";
        indent(depth);
      }
      out += "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = value.get<double>();
      if (!std::isfinite(v)) throw DataError("model: cannot serialize a non-finite number");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string text = buf;
      if (text.find_first_of(".eE") == std::string::npos) text += ".0";
      out += text;
      return;
    }
    default:
      out += value.dump();
  }
}

inline nlohmann::json model_payload(const NaiveBayesModel& model) {
  using nlohmann::json;
  const auto& vocab = model.vocabulary();
  const auto& tok = model.tokenizer();
  json payload;
  payload["variant"] = std::string(to_string(model.variant()));
  payload["scheme"] = std::string(to_string(model.scheme()));
  payload["alpha"] = model.alpha();
  payload["smoothing_denominator"] = std::string(to_string(model.smoothing()));
  payload["l2_normalize"] = model.l2_normalize();
  payload["tokenizer"] = {{"ngram_lo", tok.ngram_lo},
                          {"ngram_hi", tok.ngram_hi},
                          {"remove_stopwords", tok.remove_stopwords},
                          {"stem", tok.stem}};
  payload["stopwords_sha256"] = std::string(kStopwordsSha256);
  payload["vocabulary_params"] = {
      {"min_df", vocab.params().min_df},
      {"max_features", vocab.params().max_features ? json(*vocab.params().max_features) : json(nullptr)}};
  payload["vocabulary"] = {{"n_docs", vocab.n_docs()}, {"terms", vocab.terms()}, {"doc_freq", vocab.doc_freq()}};
  payload["classes"] = {"happy", "sad"};
  payload["log_prior"] = {model.log_prior()[0], model.log_prior()[1]};
  payload["log_param"] = {model.log_param()[0], model.log_param()[1]};
  if (model.variant() == NbVariant::Bernoulli) {
    payload["log_complement"] = {model.log_complement()[0], model.log_complement()[1]};
  }
  return payload;
}

template <typename T>
T require(const nlohmann::json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    throw ModelFormatError(std::string("model: missing field '") + key + "'");
  }
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ModelFormatError(std::string("model: field '") + key + "' has the wrong type");
  }
}

inline NaiveBayesModel model_from_payload(const nlohmann::json& payload) {
  NaiveBayesModel::Parts parts;
  const auto variant = parse_variant(require<std::string>(payload, "variant"));
  const auto scheme = parse_scheme(require<std::string>(payload, "scheme"));
  const auto smoothing = parse_smoothing(require<std::string>(payload, "smoothing_denominator"));
  if (!variant || !scheme || !smoothing) throw ModelFormatError("model: unknown variant, scheme or smoothing");
  parts.variant = *variant;
  parts.scheme = *scheme;
  parts.smoothing = *smoothing;
  parts.alpha = require<double>(payload, "alpha");
  parts.l2_normalize = require<bool>(payload, "l2_normalize");

  if (require<std::string>(payload, "stopwords_sha256") != kStopwordsSha256) {
    throw ModelFormatError("model: trained with a different stop-word list than this build ships");
  }
  const auto classes = require<std::vector<std::string>>(payload, "classes");
  if (classes != std::vector<std::string>{"happy", "sad"}) throw ModelFormatError("model: unexpected class order");

  const auto tok_json = require<nlohmann::json>(payload, "tokenizer");
  TokenizerConfig tok;
  tok.ngram_lo = require<int>(tok_json, "ngram_lo");
  tok.ngram_hi = require<int>(tok_json, "ngram_hi");
  tok.remove_stopwords = require<bool>(tok_json, "remove_stopwords");
  tok.stem = require<bool>(tok_json, "stem");
  try {
    tok.validate();
  } catch (const UsageError& e) {
    throw ModelFormatError(std::string("model: ") + e.what());
  }

  const auto params_json = require<nlohmann::json>(payload, "vocabulary_params");
  VocabBuildParams params;
  params.min_df = require<std::size_t>(params_json, "min_df");
  if (!params_json.contains("max_features")) throw ModelFormatError("model: missing field 'max_features'");
  if (!params_json.at("max_features").is_null()) params.max_features = require<std::size_t>(params_json, "max_features");

  const auto vocab_json = require<nlohmann::json>(payload, "vocabulary");
  parts.vocabulary = Vocabulary(require<std::vector<std::string>>(vocab_json, "terms"),
                                require<std::vector<std::uint32_t>>(vocab_json, "doc_freq"),
                                require<std::size_t>(vocab_json, "n_docs"), tok, params);

  const auto prior = require<std::vector<double>>(payload, "log_prior");
  if (prior.size() != 2) throw ModelFormatError("model: log_prior must have two entries");
  parts.log_prior = {prior[0], prior[1]};
  const auto rows = require<std::vector<std::vector<double>>>(payload, "log_param");
  if (rows.size() != 2) throw ModelFormatError("model: log_param must have two rows");
  parts.log_param = {rows[0], rows[1]};
  if (parts.variant == NbVariant::Bernoulli) {
    const auto comp = require<std::vector<std::vector<double>>>(payload, "log_complement");
    if (comp.size() != 2) throw ModelFormatError("model: log_complement must have two rows");
    parts.log_complement = {comp[0], comp[1]};
  }
  return NaiveBayesModel(std::move(parts));
}

}  // namespace detail

// SHA-256 of the canonical payload; the same value is stored in the file.
inline std::string model_fingerprint(const NaiveBayesModel& model) {
  return sha256_hex(detail::model_payload(model).dump());
}

inline std::string serialize_model(const NaiveBayesModel& model) {
  nlohmann::json doc;
  const auto payload = detail::model_payload(model);
  doc["format"] = std::string(kModelFormat);
  doc["format_version"] = kModelFormatVersion;
  doc["payload"] = payload;
  doc["payload_sha256"] = sha256_hex(payload.dump());
  std::string out;
  detail::emit_json(doc, out, 0);
  out += "\n";
  return out;
}

inline NaiveBayesModel parse_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelFormatError(std::string("model: truncated or malformed file (") + e.what() + ")");
  }
  if (!doc.is_object()) throw ModelFormatError("model: top level is not an object");
  if (detail::require<std::string>(doc, "format") != kModelFormat) throw ModelFormatError("model: not a model file");
  const int version = detail::require<int>(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw ModelFormatError("model: unsupported format_version " + std::to_string(version) + " (this build reads " +
                           std::to_string(kModelFormatVersion) + ")");
  }
  const auto payload = detail::require<nlohmann::json>(doc, "payload");
  const auto expected = detail::require<std::string>(doc, "payload_sha256");
  if (sha256_hex(payload.dump()) != expected) throw ModelFormatError("model: checksum mismatch, file is corrupt");
  return detail::model_from_payload(payload);
}

inline void save_model(const NaiveBayesModel& model, const std::filesystem::path& path) {
  write_file(path, serialize_model(model));
}

inline NaiveBayesModel load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

}  // namespace musicmood
