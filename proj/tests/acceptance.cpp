// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. The trend criterion reads a real corpus of at least 100k tokens
// from $BANGLAPREDICT_TREND_CORPUS, falling back to tests/data/trend_corpus.txt.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "banglapredict/corpus.hpp"
#include "banglapredict/counts.hpp"
#include "banglapredict/error.hpp"
#include "banglapredict/evaluation.hpp"
#include "banglapredict/models.hpp"
#include "cli_runner.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace banglapredict;
namespace fs = std::filesystem;

namespace {

constexpr double kArithmeticTol = 1e-9;
constexpr double kOracleTol = 1e-12;
constexpr double kNormalizationTol = 1e-9;
constexpr double kInterpolationGapPoints = 5.0;
constexpr std::uint64_t kTrendMinTokens = 100000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

const std::string S(kPad);

NgramTable table_from(const std::string& text) {
  std::istringstream in(text);
  return load_table(in);
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(12);
  o << v;
  return o.str();
}

// ---------------------------------------------------------------------------

Outcome unigram_estimation() {
  const auto t = table_from(
      "ngram-counts v1 max_order=1 total_tokens=1000000\n1\tসহকারী\t400\n1\tঅন্যান্য\t999600\n");
  const double p = mle_prob(t, 1, ContextWindow({}, 2), "সহকারী");
  return {p == 4.0e-4, "P = " + fmt(p)};
}

Outcome interpolation_arithmetic() {
  const Lambdas l{0.5, 0.33, 0.17};
  // Tables whose component MLEs are exactly the worked values.
  const auto first = table_from(
      "ngram-counts v1 max_order=3 total_tokens=70000\n"
      "1\tw\t7\n1\tv\t69993\n"
      "2\ty v\t93\n2\ty w\t7\n"
      "3\tx y w\t1\n");
  const auto second = table_from(
      "ngram-counts v1 max_order=3 total_tokens=1000000\n"
      "1\tঅন্যান্য\t999949\n1\tপর্বতমালা\t51\n"
      "2\tবৃহত্তম পর্বতমালা\t33\n2\tবৃহত্তম শহর\t67\n");
  const Sentence ctx1{"x", "y"};
  const Sentence ctx2{"দেশের", "বৃহত্তম"};
  const double a = interp_prob(first, ContextWindow(ctx1, 2), "w", l);
  const double b = interp_prob(second, ContextWindow(ctx2, 2), "পর্বতমালা", l);
  const double a_direct = interpolate(l, 1.0, 0.07, 1.0e-4);
  const double b_direct = interpolate(l, 0.0, 0.33, 5.1e-5);
  const bool ok = close(a, 0.523117, kArithmeticTol) && close(b, 0.10890867, kArithmeticTol) &&
                  close(a_direct, 0.523117, kArithmeticTol) &&
                  close(b_direct, 0.10890867, kArithmeticTol);
  return {ok, "first = " + fmt(a) + ", second = " + fmt(b)};
}

Outcome weights_sum_to_one() {
  const std::vector<Lambdas> good = {
      {0.5, 0.33, 0.17}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.2, 0.3, 0.5 + 9e-10}, {1, 0, 0}};
  for (const auto& l : good) {
    try {
      l.validate();
      PredictorConfig c;
      c.lambdas = l;
      c.validate(3);
    } catch (const ConfigError& e) {
      return {false, std::string("rejected a valid triple: ") + e.what()};
    }
  }
  bool rejected = false;
  try {
    Lambdas{0.5, 0.3, 0.1}.validate();
  } catch (const ConfigError&) {
    rejected = true;
  }
  bool rejected_file = false;
  try {
    std::istringstream in("lambda.1 = 0.5\nlambda.2 = 0.3\nlambda.3 = 0.1\n");
    load_config(in);
  } catch (const LoadError&) {
    rejected_file = true;
  }
  return {rejected && rejected_file, "(0.5, 0.3, 0.1) rejected"};
}

Outcome backoff_cascade() {
  const auto t = count_ngrams(bp_test::mini_corpus(), 3);
  const ContextWindow ctx(Sentence{"দেশের", "বৃহত্তম"}, 2);
  const auto back = predict_backoff(t, ctx, 5);
  const auto tri = predict_mle(t, 3, ctx, 5);
  const bool ok = !back.empty() && back[0].word == "পর্বতমালা" && back[0].order_used == 2 &&
                  close(back[0].score, 0.33, kArithmeticTol) && tri.empty();
  return {ok, back.empty() ? "no backoff suggestion"
                           : "backoff -> " + back[0].word + " score " + fmt(back[0].score) +
                                 " order " + std::to_string(back[0].order_used) +
                                 "; trigram suggestions " + std::to_string(tri.size())};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  const auto& alphabet = bp_test::six_symbols();
  std::vector<std::string> words = alphabet;
  words.push_back("অদেখা");
  std::vector<std::vector<std::string>> contexts = {{S, S}};
  for (const auto& a : alphabet) contexts.push_back({S, a});
  for (const auto& a : alphabet)
    for (const auto& b : alphabet) contexts.push_back({a, b});
  const std::vector<double> alphas = {0.4, 0.5};
  const std::vector<bp_test::Rational> exact_alphas = {{2, 5}, {1, 2}};
  const Lambdas lambdas{0.5, 0.33, 0.17};

  std::size_t checks = 0;
  for (int iter = 0; iter < 500; ++iter) {
    const auto corpus = bp_test::random_corpus(rng, 50, alphabet);
    const auto t = count_ngrams(corpus, 3);
    const bp_test::BruteForceModel oracle(corpus, 3);

    for (int k = 1; k <= 3; ++k) {
      std::uint64_t sum = 0;
      for (const auto& [g, c] : t.entries(k)) {
        ++checks;
        if (static_cast<std::int64_t>(c) != oracle.count(g)) return {false, "count mismatch"};
        sum += c;
      }
      if (sum != corpus.token_count()) return {false, "window total mismatch"};
    }

    for (const auto& ctx : contexts) {
      // ContextWindow pads on its own; build it from the real tokens only.
      std::vector<std::string> real;
      for (const auto& x : ctx) if (x != S) real.push_back(x);
      const ContextWindow window(real, 2);

      for (const auto& word : words) {
        for (int order = 1; order <= 3; ++order) {
          const std::vector<std::string> oc(ctx.end() - (order - 1), ctx.end());
          ++checks;
          if (!close(mle_prob(t, order, window, word), bp_test::to_double(oracle.mle(oc, word)),
                     kOracleTol)) {
            return {false, "mle mismatch"};
          }
        }
        ++checks;
        const auto exact = oracle.interp(ctx, word, {1, 2}, {33, 100}, {17, 100});
        if (!close(interp_prob(t, window, word, lambdas), bp_test::to_double(exact), kOracleTol)) {
          return {false, "interpolation mismatch"};
        }
      }

      for (const bool weighted : {false, true}) {
        const auto got = predict_backoff(t, window, 100,
                                         weighted ? std::span<const double>(alphas)
                                                  : std::span<const double>());
        const auto want = oracle.backoff(ctx, weighted ? exact_alphas : std::vector<bp_test::Rational>{});
        if (got.size() != want.scores.size()) return {false, "backoff candidate count mismatch"};
        for (const auto& s : got) {
          ++checks;
          if (s.order_used != want.order) return {false, "backoff order mismatch"};
          const auto it = std::find_if(want.scores.begin(), want.scores.end(),
                                       [&](const auto& p) { return p.first == s.word; });
          if (it == want.scores.end() || !close(s.score, bp_test::to_double(it->second), kOracleTol)) {
            return {false, "backoff score mismatch"};
          }
        }
      }
    }
  }
  return {true, std::to_string(checks) + " values matched"};
}

std::string trend_corpus_path() {
  if (const char* env = std::getenv("BANGLAPREDICT_TREND_CORPUS")) return env;
  return bp_test::data_path("trend_corpus.txt");
}

Outcome trend_reproduction() {
  const auto path = trend_corpus_path();
  if (!fs::exists(path)) {
    return {false, "no real corpus found at " + path +
                       " (set BANGLAPREDICT_TREND_CORPUS to a UTF-8 text of >= 100k tokens)"};
  }
  const auto corpus = load_corpus_file(path);
  if (corpus.token_count() < kTrendMinTokens) {
    return {false, "corpus has only " + std::to_string(corpus.token_count()) + " tokens"};
  }
  const auto report = repeated_holdout(corpus, SplitSpec{}, kAllMethods, default_lengths());
  auto avg = [&](Method m) {
    const auto it = report.averages.find(m);
    return it == report.averages.end() ? std::nan("") : 100.0 * it->second;
  };
  const double uni = avg(Method::unigram), bi = avg(Method::bigram), tri = avg(Method::trigram),
               back = avg(Method::backoff), interp = avg(Method::interpolation);
  const bool ok = uni < bi && bi < tri && back >= tri &&
                  std::abs(interp - tri) <= kInterpolationGapPoints;
  std::ostringstream d;
  d.precision(4);
  d << corpus.token_count() << " tokens; unigram " << uni << ", bigram " << bi << ", trigram "
    << tri << ", backoff " << back << ", interpolation " << interp;
  return {ok, d.str()};
}

Outcome protocol_determinism() {
  const auto dir = fs::temp_directory_path() / "bp_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto corpus = dir / "corpus.txt";
  bp_test::write_synthetic_corpus(corpus, 600, 11);
  const std::string base =
      "evaluate --corpus " + bp_test::shell_quote(corpus.string()) + " --seed 1234 --out ";
  const auto a = bp_test::run_cli(base + bp_test::shell_quote((dir / "a").string()));
  const auto b = bp_test::run_cli(base + bp_test::shell_quote((dir / "b").string()));
  if (a.exit_code != 0 || b.exit_code != 0) return {false, "evaluate failed: " + a.err + b.err};
  for (const char* f : {"report.txt", "accuracy_by_length.csv", "accuracy_average.csv"}) {
    const auto x = bp_test::read_text(dir / "a" / f);
    if (x.empty() || x != bp_test::read_text(dir / "b" / f)) return {false, std::string(f) + " differs"};
  }
  fs::remove_all(dir);
  return {true, "three report files byte-identical"};
}

Outcome normalization() {
  std::mt19937_64 rng(77);
  std::size_t contexts = 0;
  double worst = 0.0;
  while (contexts < 1000) {
    const auto corpus = bp_test::random_corpus(rng, 50);
    const auto t = count_ngrams(corpus, 3);
    for (int tries = 0; tries < 20 && contexts < 1000; ++tries) {
      Sentence fragment;
      for (std::size_t i = 0, n = rng() % 3; i < n; ++i) {
        fragment.push_back(bp_test::six_symbols()[rng() % 6]);
      }
      const ContextWindow w(fragment, 2);
      const int order = 1 + static_cast<int>(rng() % 3);
      const auto* d = t.continuations(w.suffix(static_cast<std::size_t>(order - 1)));
      if (!d) continue;
      double sum = 0.0;
      for (const auto& c : d->ranked()) sum += mle_prob(t, order, w, c.word);
      worst = std::max(worst, std::abs(sum - 1.0));
      ++contexts;
    }
  }
  return {worst <= kNormalizationTol, "1000 contexts, max |sum - 1| = " + fmt(worst)};
}

Outcome count_file_round_trip() {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto t = count_ngrams(bp_test::random_corpus(rng, 50), 1 + static_cast<int>(rng() % 4));
    std::ostringstream out;
    save_table(t, out);
    std::istringstream in(out.str());
    const auto back = load_table(in);
    if (!(back == t)) return {false, "table " + std::to_string(i) + " changed"};
    std::ostringstream again;
    save_table(back, again);
    if (again.str() != out.str()) return {false, "re-serialization differs"};
  }
  return {true, "100 tables"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"unigram estimation 400/1e6 = 4.0e-4", unigram_estimation},
      {"interpolation arithmetic 0.523117 / 0.10890867", interpolation_arithmetic},
      {"interpolation weights must sum to 1", weights_sum_to_one},
      {"backoff cascade to bigram", backoff_cascade},
      {"oracle equivalence on 500 random corpora", oracle_equivalence},
      {"trend reproduction on a real corpus", trend_reproduction},
      {"evaluate protocol determinism", protocol_determinism},
      {"conditional normalization", normalization},
      {"count file round trip", count_file_round_trip},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail << "] ("
              << fmt(secs) << " s)" << std::endl;
  }
  std::cout << (failures ? "acceptance: " + std::to_string(failures) + " criterion(s) failed"
                         : std::string("acceptance: all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
