// Command-line front end: train, predict, evaluate, serve.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banglapredict/corpus.hpp"
#include "banglapredict/counts.hpp"
#include "banglapredict/error.hpp"
#include "banglapredict/evaluation.hpp"
#include "banglapredict/model_store.hpp"
#include "banglapredict/models.hpp"
#include "banglapredict/service.hpp"

namespace bp = banglapredict;

namespace {

constexpr int kUsageError = 2;
constexpr int kFailure = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "5-17,19,20" -> {5,...,17,19,20}
std::set<std::size_t> parse_lengths(const std::string& spec) {
  std::set<std::size_t> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      const auto dash = part.find('-');
      std::size_t used = 0;
      if (dash == std::string::npos) {
        out.insert(std::stoul(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } else {
        const auto lo = std::stoul(part.substr(0, dash));
        const auto hi = std::stoul(part.substr(dash + 1));
        if (lo > hi) throw std::invalid_argument(part);
        for (auto n = lo; n <= hi; ++n) out.insert(n);
      }
    } catch (const std::exception&) {
      throw UsageError("invalid --lengths entry '" + part + "'");
    }
  }
  if (out.empty() || *out.begin() < 2) throw UsageError("--lengths needs values >= 2");
  return out;
}

std::vector<bp::Method> parse_methods(const std::string& spec) {
  std::vector<bp::Method> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    const auto m = bp::parse_method(part);
    if (!m) throw UsageError("unknown method '" + part + "'");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw UsageError("--methods is empty");
  return out;
}

struct TrainArgs {
  std::string corpus;
  int order = 3;
  std::string out;
};

int run_train(const TrainArgs& args) {
  if (args.order < 1) throw UsageError("--order must be >= 1");
  const bp::Corpus corpus = bp::load_corpus_file(args.corpus);
  if (corpus.empty()) {
    std::cerr << "error: corpus " << args.corpus << " contains no sentences\n";
    return kFailure;
  }
  const bp::NgramTable table = bp::count_ngrams(corpus, args.order);
  const auto manifest = bp::save_model(args.out, corpus, table);
  std::cerr << "trained order-" << manifest.max_order << " model " << manifest.model_id << ": "
            << manifest.sentences << " sentences, " << manifest.tokens << " tokens, "
            << manifest.word_forms << " word forms\n";
  return 0;
}

struct PredictArgs {
  std::string model;
  std::string method = "backoff";
  std::string context;
  int k = 5;
  std::string config;
  bool method_given = false;
  bool k_given = false;
};

int run_predict(const PredictArgs& args) {
  bp::PredictorConfig config;
  if (!args.config.empty()) {
    std::ifstream in(args.config);
    if (!in) throw std::runtime_error("cannot open config " + args.config);
    config = bp::load_config(in);
  }
  if (args.method_given || args.config.empty()) {
    const auto m = bp::parse_method(args.method);
    if (!m) throw UsageError("unknown method '" + args.method + "'");
    config.method = *m;
  }
  if (args.k_given || args.config.empty()) {
    if (args.k < 1 || args.k > bp::kMaxSuggestions) {
      throw UsageError("--k must be between 1 and " + std::to_string(bp::kMaxSuggestions));
    }
    config.k = args.k;
  }
  if (args.model.empty()) throw bp::NoModelError("no model given (--model or BANGLAPREDICT_MODEL)");
  const bp::Model model = bp::load_model(args.model);
  const auto fragment = bp::tokenize_fragment(args.context);
  const auto suggestions = bp::predict(model.table, config, fragment);
  if (suggestions.empty()) {
    std::cerr << "no continuation for this context under method " << bp::method_name(config.method)
              << '\n';
  }
  for (const auto& s : suggestions) {
    std::printf("%s\t%.4f\t%d\n", s.word.c_str(), s.score, s.order_used);
  }
  return 0;
}

struct EvaluateArgs {
  std::string corpus;
  std::string out = "report";
  std::uint64_t seed = 0;
  int repeats = 5;
  std::string lengths = "5-17,19,20";
  std::string methods = "unigram,bigram,trigram,backoff,interpolation";
  int order = 3;
  double grid_step = 0.05;
  std::size_t top_k = 1;
  std::size_t cases_per_length = bp::kCasesPerLength;
};

int run_evaluate(const EvaluateArgs& args) {
  const auto lengths = parse_lengths(args.lengths);
  const auto methods = parse_methods(args.methods);
  if (args.repeats < 1) throw UsageError("--repeats must be >= 1");
  const bp::Corpus corpus = bp::load_corpus_file(args.corpus);

  bp::SplitSpec spec;
  spec.seed = args.seed;
  spec.repeats = args.repeats;
  bp::EvalOptions options;
  options.max_order = args.order;
  options.grid_step = args.grid_step;
  options.top_k = args.top_k;
  options.cases_per_length = args.cases_per_length;

  const auto report = bp::repeated_holdout(corpus, spec, methods, lengths, options);
  const auto rendered = bp::render_report(report);
  bp::write_report(rendered, args.out);
  std::cout << rendered.table_text;
  return 0;
}

struct ServeArgs {
  std::string model;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string allow_origin;
};

bp::HttpServer* g_server = nullptr;

int run_serve(const ServeArgs& args) {
  if (args.model.empty()) throw bp::NoModelError("no model given (--model or BANGLAPREDICT_MODEL)");
  const bp::PredictionService service(bp::load_model(args.model));
  bp::ServerOptions options;
  options.host = args.host;
  options.port = args.port;
  options.allow_origin = args.allow_origin;
  bp::HttpServer server(service, options);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cerr << "serving model " << service.model().manifest.model_id << " on http://" << args.host
            << ':' << server.port() << '\n';
  server.wait();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical next-word prediction with n-gram models"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Count n-grams in a corpus and write a model directory");
  train_cmd->add_option("--corpus", train.corpus, "UTF-8 corpus file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--order", train.order, "Highest n-gram order")->capture_default_str();
  train_cmd->add_option("--out", train.out, "Output model directory")->required();

  PredictArgs pred;
  auto* predict_cmd = app.add_subcommand("predict", "Print the top-k next words for a fragment");
  predict_cmd->add_option("--model", pred.model, "Model directory")->envname("BANGLAPREDICT_MODEL");
  auto* method_opt = predict_cmd->add_option("--method", pred.method,
                                             "unigram|bigram|trigram|backoff|interpolation")
                         ->capture_default_str();
  predict_cmd->add_option("--context", pred.context, "Sentence fragment typed so far");
  auto* k_opt = predict_cmd->add_option("--k", pred.k, "Number of suggestions")->capture_default_str();
  predict_cmd->add_option("--config", pred.config, "Predictor config file (key = value)");

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Repeated-holdout accuracy report");
  eval_cmd->add_option("--corpus", eval.corpus, "UTF-8 corpus file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval.out, "Report directory")->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed)->capture_default_str();
  eval_cmd->add_option("--repeats", eval.repeats)->capture_default_str();
  eval_cmd->add_option("--lengths", eval.lengths, "Sentence lengths, e.g. 5-17,19,20")->capture_default_str();
  eval_cmd->add_option("--methods", eval.methods, "Comma-separated methods")->capture_default_str();
  eval_cmd->add_option("--order", eval.order)->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--grid-step", eval.grid_step, "Lambda grid spacing")->capture_default_str();
  eval_cmd->add_option("--top-k", eval.top_k, "Also report top-k hit rate when > 1")
      ->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--cases-per-length", eval.cases_per_length)->capture_default_str()
      ->check(CLI::PositiveNumber);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP prediction service");
  serve_cmd->add_option("--model", serve.model, "Model directory")->envname("BANGLAPREDICT_MODEL");
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port)->capture_default_str()->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--allow-origin", serve.allow_origin, "CORS origin for the browser demo");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  pred.method_given = method_opt->count() > 0;
  pred.k_given = k_opt->count() > 0;

  try {
    if (*train_cmd) return run_train(train);
    if (*predict_cmd) return run_predict(pred);
    if (*eval_cmd) return run_evaluate(eval);
    if (*serve_cmd) return run_serve(serve);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const bp::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
