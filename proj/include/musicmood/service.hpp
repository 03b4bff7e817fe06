#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"
#include "musicmood/bayes.hpp"
#include "musicmood/model_io.hpp"
#include "musicmood/pipeline.hpp"

// HTTP prediction endpoint.
//
//   POST /predict     {"lyrics": "...", "id": "optional"}
//                  -> {"label", "p_happy", "p_sad", "model_fingerprint", "id"?}
//   GET  /healthz     {"status": "ok", "model_fingerprint"}
//   GET  /model/info  variant, scheme, alpha, vocabulary size, tokenizer, ...
//
// The model is loaded once and shared read-only by all handler threads.
namespace musicmood {

// The JSON object returned for one prediction. `predict --json` prints the
// same object, so both surfaces agree byte for byte.
inline nlohmann::json prediction_json(const Posterior& post, const std::string& fingerprint,
                                      const std::optional<std::string>& id = std::nullopt) {
  nlohmann::json out{{"label", std::string(to_string(argmax_label(post.log_score)))},
                     {"p_happy", post.p_happy()},
                     {"p_sad", post.p_sad()},
                     {"model_fingerprint", fingerprint}};
  if (id) out["id"] = *id;
  return out;
}

struct ServiceOptions {
  std::size_t max_body_bytes = 1 << 20;
  // Runs at the start of every /predict request. Test instrumentation.
  std::function<void()> on_predict;
};

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

class PredictionService {
 public:
  explicit PredictionService(NaiveBayesModel model)
      : model_(std::move(model)), fingerprint_(model_fingerprint(model_)) {}

  const NaiveBayesModel& model() const { return model_; }
  const std::string& fingerprint() const { return fingerprint_; }

  HttpReply predict(std::string_view body) const {
    nlohmann::json request;
    try {
      request = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      return error(400, "body", std::string("malformed JSON: ") + e.what());
    }
    if (!request.is_object()) return error(400, "body", "request must be a JSON object");
    if (!request.contains("lyrics")) return error(400, "lyrics", "missing field 'lyrics'");
    if (!request["lyrics"].is_string()) return error(400, "lyrics", "field 'lyrics' must be a string");
    const auto& lyrics = request["lyrics"].get_ref<const std::string&>();
    if (lyrics.find_first_not_of(" \t\r\n\f\v") == std::string::npos) {
      return error(400, "lyrics", "field 'lyrics' is empty");
    }
    std::optional<std::string> id;
    if (request.contains("id")) {
      if (!request["id"].is_string()) return error(400, "id", "field 'id' must be a string");
      id = request["id"].get<std::string>();
    }
    return {200, prediction_json(predict_lyrics(model_, lyrics), fingerprint_, id)};
  }

  HttpReply health() const { return {200, {{"status", "ok"}, {"model_fingerprint", fingerprint_}}}; }

  HttpReply info() const {
    const auto& tok = model_.tokenizer();
    const auto& params = model_.vocabulary().params();
    return {200,
            {{"variant", std::string(to_string(model_.variant()))},
             {"scheme", std::string(to_string(model_.scheme()))},
             {"alpha", model_.alpha()},
             {"smoothing_denominator", std::string(to_string(model_.smoothing()))},
             {"l2_normalize", model_.l2_normalize()},
             {"vocabulary_size", model_.vocabulary().size()},
             {"training_documents", model_.vocabulary().n_docs()},
             {"min_df", params.min_df},
             {"max_features", params.max_features ? nlohmann::json(*params.max_features) : nlohmann::json(nullptr)},
             {"tokenizer",
              {{"ngram_lo", tok.ngram_lo},
               {"ngram_hi", tok.ngram_hi},
               {"remove_stopwords", tok.remove_stopwords},
               {"stem", tok.stem}}},
             {"model_fingerprint", fingerprint_}}};
  }

 private:
  static HttpReply error(int status, const std::string& field, const std::string& message) {
    return {status, {{"error", message}, {"field", field}}};
  }

  NaiveBayesModel model_;
  std::string fingerprint_;
};

inline void configure_routes(httplib::Server& server, const PredictionService& service,
                             const ServiceOptions& options = {}) {
  server.set_payload_max_length(options.max_body_bytes);
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server.Post("/predict", [&service, on_predict = options.on_predict, send](const httplib::Request& req,
                                                                            httplib::Response& res) {
    if (on_predict) on_predict();
    send(res, service.predict(req.body));
  });
  server.Get("/healthz", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.health());
  });
  server.Get("/model/info", [&service, send](const httplib::Request&, httplib::Response& res) {
    send(res, service.info());
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    nlohmann::json body{{"error", httplib::status_message(res.status)}};
    if (res.status == 413) body["field"] = "body";
    res.set_content(body.dump(), "application/json");
  });
}

}  // namespace musicmood
