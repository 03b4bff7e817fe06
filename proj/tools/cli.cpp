#include "cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "musicmood/musicmood.hpp"

#ifndef MUSICMOOD_DATA_DIR
#define MUSICMOOD_DATA_DIR "data"
#endif

namespace musicmood::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum class Format { Table, Csv, Json };

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string format = "table";
  bool quiet = false;

  Format fmt() const {
    if (format == "csv") return Format::Csv;
    if (format == "json") return Format::Json;
    return Format::Table;
  }
};

struct CorpusArgs {
  std::string path;
  bool english_only = false;
  std::string dictionary = std::string(MUSICMOOD_DATA_DIR) + "/english_10k.txt";
  double english_threshold = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("corpus", path, "Corpus CSV (artist,title,year,lyrics,mood)")->required();
    cmd->add_flag("--english-only", english_only, "Drop songs whose lyrics are not mostly English words");
    cmd->add_option("--dictionary", dictionary, "Word list used by --english-only");
    cmd->add_option("--english-threshold", english_threshold, "Minimum dictionary fraction (exclusive)");
  }

  Corpus load(std::ostream& err, bool quiet) const {
    Corpus corpus = load_corpus(path);
    if (!english_only) return corpus;
    const auto before = corpus.size();
    corpus = filter_english(corpus, load_wordlist(dictionary), english_threshold);
    if (!quiet) err << "english filter kept " << corpus.size() << " of " << before << " songs\n";
    return corpus;
  }
};

RunConfig load_run_config(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("config file not found: " + path);
  return parse_run_config(read_file(path), path);
}

std::string cell(double v) { return format_real(v); }

std::string cell(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

json json_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Left-aligned columns separated by two spaces.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

void print_csv(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& r : rows) out << csv::format_row(r);
}

void print_rows(std::ostream& out, Format fmt, const std::vector<std::vector<std::string>>& rows) {
  if (fmt == Format::Csv) print_csv(out, rows);
  else print_table(out, rows);
}

// ---- stats -----------------------------------------------------------------

struct StatsArgs {
  CorpusArgs corpus;
  std::size_t top_terms = 10;
  std::string label = "both";
  bool keep_stopwords = false;
  bool stem = false;
};

int cmd_stats(const Globals& g, const StatsArgs& a, std::ostream& out, std::ostream& err) {
  const Corpus corpus = a.corpus.load(err, g.quiet);
  const auto dist = label_distribution(corpus);
  const auto decades = decade_distribution(corpus);
  const TokenizerConfig tok{1, 1, !a.keep_stopwords, a.stem};

  std::vector<MoodLabel> labels;
  if (a.label == "both") labels = {MoodLabel::Happy, MoodLabel::Sad};
  else labels = {*parse_label(a.label)};
  std::vector<std::pair<MoodLabel, std::vector<TermCount>>> terms;
  for (auto l : labels) {
    if (dist[l].count == 0) {
      if (a.label != "both") throw DataError("stats: no " + std::string(to_string(l)) + " songs in corpus");
      continue;
    }
    terms.emplace_back(l, top_terms(corpus, l, a.top_terms, tok));
  }

  if (g.fmt() == Format::Json) {
    json j;
    j["songs"] = corpus.size();
    j["duplicate_rows"] = corpus.duplicate_rows;
    for (auto l : kLabels) {
      j["labels"][std::string(to_string(l))] = {{"count", dist[l].count}, {"fraction", json_real(dist[l].fraction)}};
    }
    j["labels"]["unlabeled"] = dist.unlabeled;
    j["decades"] = json::array();
    for (const auto& b : decades) {
      j["decades"].push_back({{"decade", b.decade ? json(*b.decade) : json("unknown")},
                              {"songs", b.songs},
                              {"happy", b.happy},
                              {"sad", b.sad},
                              {"sad_fraction", json_real(b.sad_fraction)}});
    }
    j["top_terms"] = json::object();
    for (const auto& [l, list] : terms) {
      auto& arr = j["top_terms"][std::string(to_string(l))] = json::array();
      for (const auto& t : list) arr.push_back({{"term", t.term}, {"count", t.count}});
    }
    out << j.dump() << '\n';
    return kOk;
  }

  const Format fmt = g.fmt();
  std::vector<std::vector<std::string>> rows{{"mood", "count", "fraction"}};
  for (auto l : kLabels) {
    rows.push_back({std::string(to_string(l)), std::to_string(dist[l].count), cell(dist[l].fraction)});
  }
  if (dist.unlabeled > 0) rows.push_back({"unlabeled", std::to_string(dist.unlabeled), ""});
  if (fmt == Format::Table) {
    out << corpus.size() << " songs, " << corpus.duplicate_rows << " duplicate (artist, title) rows\n\n";
  }
  print_rows(out, fmt, rows);
  out << '\n';

  rows = {{"decade", "songs", "happy", "sad", "sad_fraction"}};
  for (const auto& b : decades) {
    rows.push_back({b.decade ? std::to_string(*b.decade) + "s" : "unknown", std::to_string(b.songs),
                    std::to_string(b.happy), std::to_string(b.sad), cell(b.sad_fraction)});
  }
  print_rows(out, fmt, rows);

  for (const auto& [l, list] : terms) {
    out << '\n';
    rows = {{"rank", std::string(to_string(l)) + "_term", "count"}};
    for (std::size_t i = 0; i < list.size(); ++i) {
      rows.push_back({std::to_string(i + 1), list[i].term, std::to_string(list[i].count)});
    }
    print_rows(out, fmt, rows);
  }
  return kOk;
}

// ---- reports ---------------------------------------------------------------

void print_report(std::ostream& out, Format fmt, const EvalReport& r) {
  const auto& cm = r.confusion;
  const std::optional<double> auc = r.roc ? std::optional<double>(r.roc->auc) : std::nullopt;
  if (fmt == Format::Json) {
    json j{{"documents", cm.total()},
           {"confusion", {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}}},
           {"accuracy", r.accuracy},
           {"precision", r.precision},
           {"recall", r.recall},
           {"f1", r.f1},
           {"roc_auc", json_real(auc)}};
    out << j.dump() << '\n';
    return;
  }
  std::vector<std::vector<std::string>> rows{{"metric", "value"},
                                             {"documents", std::to_string(cm.total())},
                                             {"tp", std::to_string(cm.tp)},
                                             {"fp", std::to_string(cm.fp)},
                                             {"fn", std::to_string(cm.fn)},
                                             {"tn", std::to_string(cm.tn)},
                                             {"accuracy", cell(r.accuracy)},
                                             {"precision", cell(r.precision)},
                                             {"recall", cell(r.recall)},
                                             {"f1", cell(r.f1)},
                                             {"roc_auc", auc ? cell(*auc) : "n/a"}};
  print_rows(out, fmt, rows);
}

void require_labels(const Corpus& corpus, const std::string& what) {
  if (corpus.empty()) throw DataError(what + ": corpus has no songs");
  for (const auto& s : corpus.songs) {
    if (!s.label) {
      throw DataError(what + ": song at row " + std::to_string(s.row) + " has no mood label; " + what +
                      " needs a labeled corpus");
    }
  }
}

// ---- train / eval ----------------------------------------------------------

struct TrainArgs {
  CorpusArgs corpus;
  std::string config;
  std::string out;
  bool force = false;
};

int cmd_train(const Globals& g, const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const RunConfig rc = load_run_config(a.config);
  if (fs::exists(a.out) && !a.force) {
    throw UsageError("refusing to overwrite existing " + a.out + " (use --force)");
  }
  const Corpus corpus = a.corpus.load(err, g.quiet);
  require_labels(corpus, "train");
  const auto docs = detail::tokenize_all(corpus, rc.pipeline.tokenizer);
  const auto labels = detail::labels_of(corpus);
  const NaiveBayesModel model = train_on_tokens(docs, labels, rc.pipeline);
  save_model(model, a.out);
  if (!g.quiet) {
    err << "trained " << to_string(model.variant()) << '/' << to_string(model.scheme()) << " on " << corpus.size()
        << " songs, " << model.vocabulary().size() << " terms; wrote " << a.out << '\n';
  }
  print_report(out, g.fmt(), evaluate_holdout(model, corpus));
  return kOk;
}

void write_roc(const std::string& path, const RocCurve& curve) {
  std::ostringstream buffer;
  write_roc_csv(buffer, curve);
  write_file(path, buffer.str());
}

struct EvalArgs {
  std::string model;
  CorpusArgs corpus;
  std::string roc_out;
};

int cmd_eval(const Globals& g, const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const NaiveBayesModel model = load_model(a.model);
  const Corpus corpus = a.corpus.load(err, g.quiet);
  require_labels(corpus, "eval");
  const EvalReport report = evaluate_holdout(model, corpus);
  if (!a.roc_out.empty()) {
    if (!report.roc) throw DataError("eval: an ROC curve needs both happy and sad songs");
    write_roc(a.roc_out, *report.roc);
  }
  print_report(out, g.fmt(), report);
  return kOk;
}

// ---- cv / gridsearch -------------------------------------------------------

struct CvArgs {
  CorpusArgs corpus;
  std::string config;
  std::optional<std::size_t> folds;
  std::string objective;
  std::string roc_out;
};

int cmd_cv(const Globals& g, const CvArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig rc = load_run_config(a.config);
  if (g.seed) rc.seed = *g.seed;
  if (a.folds) rc.folds = *a.folds;
  if (!a.objective.empty()) rc.objective = *parse_objective(a.objective);
  const Corpus corpus = a.corpus.load(err, g.quiet);
  require_labels(corpus, "cv");
  const CvResult cv = cross_validate(corpus, rc.pipeline, rc.folds, rc.seed, rc.objective);

  std::vector<RocCurve> curves;
  for (const auto& f : cv.folds) curves.push_back(f.roc);
  const RocCurve mean_curve = mean_roc_curve(curves);
  if (!a.roc_out.empty()) write_roc(a.roc_out, mean_curve);

  double f1_total = 0.0;
  double auc_total = 0.0;
  for (const auto& f : cv.folds) {
    f1_total += f.f1;
    auc_total += f.roc_auc;
  }
  const double n = static_cast<double>(cv.folds.size());
  if (g.fmt() == Format::Json) {
    json j{{"objective", std::string(to_string(cv.objective))},
           {"mean", cv.mean},
           {"mean_f1", f1_total / n},
           {"mean_roc_auc", auc_total / n},
           {"mean_curve_auc", mean_curve.auc},
           {"folds", json::array()}};
    for (const auto& f : cv.folds) j["folds"].push_back({{"f1", f.f1}, {"roc_auc", f.roc_auc}});
    out << j.dump() << '\n';
    return kOk;
  }
  std::vector<std::vector<std::string>> rows{{"fold", "f1", "roc_auc"}};
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    rows.push_back({std::to_string(f), cell(cv.folds[f].f1), cell(cv.folds[f].roc_auc)});
  }
  rows.push_back({"mean", cell(f1_total / n), cell(auc_total / n)});
  print_rows(out, g.fmt(), rows);
  if (g.fmt() == Format::Table) {
    out << "\nobjective " << to_string(cv.objective) << ": " << cell(cv.mean) << '\n';
  }
  return kOk;
}

struct GridArgs {
  CorpusArgs corpus;
  std::string grid;
  std::string out;
  std::string best_config;
  std::size_t jobs = 1;
};

int cmd_gridsearch(const Globals& g, const GridArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::exists(a.grid)) throw UsageError("grid spec not found: " + a.grid);
  GridSearchSpec spec = parse_grid_spec(read_file(a.grid), a.grid);
  if (g.seed) spec.seed = *g.seed;
  if (a.jobs == 0) throw UsageError("gridsearch: --jobs must be at least 1");
  const Corpus corpus = a.corpus.load(err, g.quiet);
  require_labels(corpus, "gridsearch");
  if (!g.quiet) {
    err << "evaluating " << spec.combination_count() << " combinations with " << spec.folds << "-fold CV\n";
  }
  const GridSearchResult result = grid_search(corpus, spec, a.jobs);

  std::ostringstream csv_text;
  write_grid_csv(csv_text, result);
  write_file(a.out, csv_text.str());
  const std::string best_path = a.best_config.empty() ? a.out + ".best.cfg" : a.best_config;
  const GridRow& best = result.best();
  write_file(best_path, format_run_config(run_config_from_grid(spec, best)));

  std::vector<const GridRow*> ranked;
  for (const auto& r : result.rows) ranked.push_back(&r);
  std::sort(ranked.begin(), ranked.end(), [](const GridRow* x, const GridRow* y) { return x->rank < y->rank; });

  auto describe = [](const GridRow& r) {
    const auto& c = r.config;
    return std::vector<std::string>{std::to_string(r.rank),
                                    std::to_string(r.index),
                                    std::string(to_string(c.variant)),
                                    std::string(to_string(c.scheme)),
                                    std::to_string(c.tokenizer.ngram_lo) + "-" + std::to_string(c.tokenizer.ngram_hi),
                                    c.tokenizer.remove_stopwords ? "true" : "false",
                                    c.tokenizer.stem ? "true" : "false",
                                    format_optional_size(c.vocab.max_features),
                                    std::to_string(c.vocab.min_df),
                                    format_real(c.alpha),
                                    format_real(r.cv.mean)};
  };
  if (g.fmt() == Format::Json) {
    json j{{"combinations", result.rows.size()},
           {"objective", std::string(to_string(result.objective))},
           {"results", a.out},
           {"best_config", best_path},
           {"ranking", json::array()}};
    for (const auto* r : ranked) {
      const auto d = describe(*r);
      j["ranking"].push_back({{"rank", r->rank},
                              {"combination", r->index},
                              {"model", d[2]},
                              {"scheme", d[3]},
                              {"ngram", d[4]},
                              {"remove_stopwords", r->config.tokenizer.remove_stopwords},
                              {"stem", r->config.tokenizer.stem},
                              {"max_features", d[7]},
                              {"min_df", r->config.vocab.min_df},
                              {"alpha", r->config.alpha},
                              {"score", r->cv.mean}});
    }
    out << j.dump() << '\n';
    return kOk;
  }
  std::vector<std::vector<std::string>> rows{{"rank", "combination", "model", "scheme", "ngram", "remove_stopwords",
                                              "stem", "max_features", "min_df", "alpha",
                                              "mean_" + std::string(to_string(result.objective))}};
  for (const auto* r : ranked) rows.push_back(describe(*r));
  print_rows(out, g.fmt(), rows);
  if (g.fmt() == Format::Table) out << "\nresults: " << a.out << "\nbest config: " << best_path << '\n';
  return kOk;
}

// ---- predict ---------------------------------------------------------------

// Documents are separated by lines holding only `---`. Whitespace-only
// documents are skipped.
std::vector<std::string> split_documents(std::istream& in) {
  std::vector<std::string> docs;
  std::string current;
  std::string line;
  auto flush = [&] {
    if (current.find_first_not_of(" \t\r\n\f\v") != std::string::npos) docs.push_back(current);
    current.clear();
  };
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view == "---") {
      flush();
      continue;
    }
    current += line;
    current += '\n';
  }
  flush();
  return docs;
}

struct PredictArgs {
  std::string model;
  std::string input;
  bool json_lines = false;
};

int cmd_predict(const Globals& g, const PredictArgs& a, std::istream& in, std::ostream& out) {
  const NaiveBayesModel model = load_model(a.model);
  const std::string fingerprint = model_fingerprint(model);
  std::vector<std::string> docs;
  if (a.input.empty() || a.input == "-") {
    docs = split_documents(in);
  } else {
    std::istringstream file(read_file(a.input));
    docs = split_documents(file);
  }
  const Format fmt = a.json_lines ? Format::Json : g.fmt();
  if (fmt == Format::Csv && !docs.empty()) out << "label,p_happy,p_sad\n";
  for (const auto& doc : docs) {
    const Posterior post = predict_lyrics(model, doc);
    if (fmt == Format::Json) {
      out << prediction_json(post, fingerprint).dump() << '\n';
      continue;
    }
    const char sep = fmt == Format::Csv ? ',' : '\t';
    out << to_string(argmax_label(post.log_score)) << sep << cell(post.p_happy()) << sep << cell(post.p_sad())
        << '\n';
  }
  return kOk;
}

// ---- synth / split ---------------------------------------------------------

struct SynthArgs {
  std::string out;
  SynthParams params;
};

int cmd_synth(const Globals& g, SynthArgs a, std::ostream& out) {
  if (g.seed) a.params.seed = *g.seed;
  const Corpus corpus = generate_synthetic_corpus(a.params);
  save_corpus(corpus, a.out);
  if (!g.quiet) {
    const auto dist = label_distribution(corpus);
    out << "wrote " << corpus.size() << " songs (" << dist[MoodLabel::Happy].count << " happy, "
        << dist[MoodLabel::Sad].count << " sad) to " << a.out << '\n';
  }
  return kOk;
}

struct SplitArgs {
  CorpusArgs corpus;
  std::size_t train = 0;
  std::size_t validation = 0;
  bool balance = false;
  std::string train_out;
  std::string validation_out;
};

int cmd_split(const Globals& g, const SplitArgs& a, std::ostream& out, std::ostream& err) {
  const Corpus corpus = a.corpus.load(err, g.quiet);
  const SplitResult parts = split(corpus, {a.train, a.validation, g.seed.value_or(0), a.balance});
  save_corpus(parts.train, a.train_out);
  save_corpus(parts.validation, a.validation_out);
  if (!g.quiet) {
    out << "train: " << parts.train.size() << " songs -> " << a.train_out << '\n'
        << "validation: " << parts.validation.size() << " songs -> " << a.validation_out << '\n';
  }
  return kOk;
}

// ---- serve -----------------------------------------------------------------

struct ServeArgs {
  std::string model;
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::size_t max_body_bytes = 1 << 20;
};

// SIGINT/SIGTERM are blocked before the server threads start and collected by
// a dedicated thread, which asks the server to stop. httplib then finishes the
// requests already being handled before listen returns.
int cmd_serve(const Globals& g, const ServeArgs& a, std::ostream& out) {
  const PredictionService service(load_model(a.model));
  httplib::Server server;
  ServiceOptions options;
  options.max_body_bytes = a.max_body_bytes;
  configure_routes(server, service, options);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGUSR1);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  struct RestoreMask {
    sigset_t mask;
    ~RestoreMask() { pthread_sigmask(SIG_SETMASK, &mask, nullptr); }
  } restore{previous};

  int port = a.port;
  if (port == 0) {
    port = server.bind_to_any_port(a.bind);
  } else if (!server.bind_to_port(a.bind, port)) {
    port = -1;
  }
  if (port < 0) throw DataError("cannot listen on " + a.bind + ":" + std::to_string(a.port));
  if (!g.quiet) out << "listening on " << a.bind << ':' << port << std::endl;

  std::atomic<bool> signalled{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (sig != SIGUSR1) {
      signalled = true;
      server.stop();
    }
  });
  const bool clean = server.listen_after_bind();
  if (!signalled) pthread_kill(waiter.native_handle(), SIGUSR1);
  waiter.join();
  if (!g.quiet) out << "stopped" << std::endl;
  return clean || signalled ? kOk : kDataError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Happy/sad classification of song lyrics with naive Bayes", "musicmood"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice (overrides config files)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Label, decade and top-term summaries of a corpus");
  stats.corpus.attach(stats_cmd);
  stats_cmd->add_option("--top-terms", stats.top_terms, "Terms listed per label")->check(CLI::PositiveNumber);
  stats_cmd->add_option("--label", stats.label, "Label whose top terms are listed")
      ->check(CLI::IsMember({"happy", "sad", "both"}));
  stats_cmd->add_flag("--keep-stopwords", stats.keep_stopwords, "Count stop words in top terms");
  stats_cmd->add_flag("--stem", stats.stem, "Stem terms before counting");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit a model on a labeled corpus");
  train.corpus.attach(train_cmd);
  train_cmd->add_option("--config", train.config, "Run config file")->required();
  train_cmd->add_option("--out", train.out, "Model output path")->required();
  train_cmd->add_flag("--force", train.force, "Overwrite an existing model file");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model on a labeled corpus");
  eval_cmd->add_option("model", eval.model, "Model file")->required();
  eval.corpus.attach(eval_cmd);
  eval_cmd->add_option("--roc-out", eval.roc_out, "Write the ROC curve as CSV");

  CvArgs cv;
  auto* cv_cmd = app.add_subcommand("cv", "Stratified k-fold cross-validation of one configuration");
  cv.corpus.attach(cv_cmd);
  cv_cmd->add_option("--config", cv.config, "Run config file")->required();
  cv_cmd->add_option("--folds", cv.folds, "Number of folds (overrides the config)");
  cv_cmd->add_option("--objective", cv.objective, "f1 or roc_auc (overrides the config)")
      ->check(CLI::IsMember({"f1", "roc_auc"}));
  cv_cmd->add_option("--roc-out", cv.roc_out, "Write the mean ROC curve as CSV");

  GridArgs grid;
  auto* grid_cmd = app.add_subcommand("gridsearch", "Cross-validate every combination of a grid");
  grid.corpus.attach(grid_cmd);
  grid_cmd->add_option("--grid", grid.grid, "Grid spec file")->required();
  grid_cmd->add_option("--out", grid.out, "Results CSV path")->required();
  grid_cmd->add_option("--best-config", grid.best_config, "Best run config path (default <out>.best.cfg)");
  grid_cmd->add_option("--jobs", grid.jobs, "Worker threads");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Classify lyrics read from a file or stdin");
  predict_cmd->add_option("model", predict.model, "Model file")->required();
  predict_cmd->add_option("--input", predict.input, "Lyrics file; documents separated by '---' lines");
  predict_cmd->add_flag("--json", predict.json_lines, "One JSON object per document");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled corpus");
  synth_cmd->add_option("--out", synth.out, "Output CSV")->required();
  synth_cmd->add_option("--n", synth.params.n_docs, "Number of songs");
  synth_cmd->add_option("--separation", synth.params.separation, "0 = identical classes, 1 = disjoint");
  synth_cmd->add_option("--happy-fraction", synth.params.happy_fraction, "Probability of a happy song");

  SplitArgs split_args;
  auto* split_cmd = app.add_subcommand("split", "Split a corpus into train and validation files");
  split_args.corpus.attach(split_cmd);
  split_cmd->add_option("--train", split_args.train, "Training songs")->required();
  split_cmd->add_option("--validation", split_args.validation, "Validation songs")->required();
  split_cmd->add_flag("--balance", split_args.balance, "Equal happy and sad counts in validation");
  split_cmd->add_option("--train-out", split_args.train_out, "Training CSV path")->required();
  split_cmd->add_option("--validation-out", split_args.validation_out, "Validation CSV path")->required();

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve predictions over HTTP");
  serve_cmd->add_option("model", serve.model, "Model file")->required();
  serve_cmd->add_option("--bind", serve.bind, "Address to bind");
  serve_cmd->add_option("--port", serve.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--max-body-bytes", serve.max_body_bytes, "Largest accepted request body");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*stats_cmd) return cmd_stats(g, stats, out, err);
    if (*train_cmd) return cmd_train(g, train, out, err);
    if (*eval_cmd) return cmd_eval(g, eval, out, err);
    if (*cv_cmd) return cmd_cv(g, cv, out, err);
    if (*grid_cmd) return cmd_gridsearch(g, grid, out, err);
    if (*predict_cmd) return cmd_predict(g, predict, in, out);
    if (*synth_cmd) return cmd_synth(g, synth, out);
    if (*split_cmd) return cmd_split(g, split_args, out, err);
    if (*serve_cmd) return cmd_serve(g, serve, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace musicmood::cli
