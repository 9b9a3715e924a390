#include "banglapredict/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <thread>

#include "banglapredict/error.hpp"

namespace banglapredict {

namespace {

std::uint64_t subsplit_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

std::size_t train_size(std::size_t n, double fraction) {
  // 2/3 of 99 must be exactly 66, not 67 from rounding noise.
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

std::size_t total_correct(const LengthCells& cells, std::size_t& total) {
  std::size_t correct = 0;
  total = 0;
  for (const auto& [len, c] : cells) {
    correct += c.correct;
    total += c.total;
  }
  return correct;
}

}  // namespace

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie strictly inside (0, 1)");
  }
  if (!(validation_fraction_of_train > 0.0 && validation_fraction_of_train < 1.0)) {
    throw ConfigError("validation_fraction_of_train must lie strictly inside (0, 1)");
  }
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
}

Split holdout_split(const Corpus& corpus, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train_fraction must lie strictly inside (0, 1)");
  }
  const std::size_t n = corpus.size();
  if (n < 3) {
    throw EvaluationError("holdout split needs at least 3 sentences, got " + std::to_string(n));
  }
  // Fisher-Yates with a fixed engine; std::shuffle is not portable across
  // standard libraries.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng() % (i + 1)]);
  }
  const std::size_t cut = train_size(n, train_fraction);
  std::vector<Sentence> train, test;
  train.reserve(cut);
  test.reserve(n - cut);
  for (std::size_t i = 0; i < n; ++i) {
    (i < cut ? train : test).push_back(corpus.sentences()[order[i]]);
  }
  return {Corpus(std::move(train)), Corpus(std::move(test))};
}

Split holdout_split(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  return holdout_split(corpus, spec.train_fraction, spec.seed);
}

std::set<std::size_t> default_lengths() {
  std::set<std::size_t> lengths;
  for (std::size_t n = 5; n <= 17; ++n) lengths.insert(n);
  lengths.insert(19);
  lengths.insert(20);
  return lengths;
}

std::vector<EvalCase> make_cases(const Corpus& test, const std::set<std::size_t>& lengths,
                                 std::size_t cap) {
  if (lengths.empty()) throw ConfigError("at least one sentence length is required");
  if (*lengths.begin() < 2) throw ConfigError("sentence lengths must be >= 2");
  std::map<std::size_t, std::size_t> taken;
  std::vector<EvalCase> cases;
  for (const auto& s : test.sentences()) {
    if (!lengths.count(s.size())) continue;
    auto& n = taken[s.size()];
    if (n >= cap) continue;
    ++n;
    cases.push_back({Sentence(s.begin(), s.end() - 1), s.back(), s.size()});
  }
  return cases;
}

LengthCells evaluate(const NgramTable& table, const PredictorConfig& config,
                     std::span<const EvalCase> cases, std::size_t top_k) {
  PredictorConfig cfg = config;
  cfg.k = static_cast<int>(std::max<std::size_t>(top_k, 1));

  auto score_range = [&](std::size_t begin, std::size_t end) {
    LengthCells cells;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& c = cases[i];
      auto& cell = cells[c.length];
      ++cell.total;
      const auto suggestions = predict(table, cfg, c.fragment);
      if (!suggestions.empty() && suggestions.front().word == c.target) ++cell.correct;
      for (const auto& s : suggestions) {
        if (s.word == c.target) {
          ++cell.correct_in_top_k;
          break;
        }
      }
    }
    return cells;
  };

  const std::size_t workers = std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), std::max<std::size_t>(cases.size() / 64, 1));
  LengthCells merged;
  if (workers <= 1) {
    merged = score_range(0, cases.size());
  } else {
    const std::size_t chunk = (cases.size() + workers - 1) / workers;
    std::vector<std::future<LengthCells>> parts;
    for (std::size_t b = 0; b < cases.size(); b += chunk) {
      parts.push_back(std::async(std::launch::async, score_range, b, std::min(b + chunk, cases.size())));
    }
    for (auto& p : parts) {
      for (const auto& [len, cell] : p.get()) {
        auto& m = merged[len];
        m.correct += cell.correct;
        m.total += cell.total;
        m.correct_in_top_k += cell.correct_in_top_k;
      }
    }
  }
  return merged;
}

EvalReport repeated_holdout(const Corpus& corpus, const SplitSpec& spec,
                            std::span<const Method> methods,
                            const std::set<std::size_t>& lengths, const EvalOptions& options) {
  spec.validate();
  if (methods.empty()) throw ConfigError("at least one method is required");
  if (lengths.empty()) throw ConfigError("at least one sentence length is required");

  EvalReport report;
  report.spec = spec;
  report.options = options;
  report.methods.assign(methods.begin(), methods.end());
  report.lengths.assign(lengths.begin(), lengths.end());
  const bool wants_interpolation =
      std::find(methods.begin(), methods.end(), Method::interpolation) != methods.end();

  for (int r = 0; r < spec.repeats; ++r) {
    RepeatAudit audit;
    audit.repeat = r;
    audit.seed = spec.seed + static_cast<std::uint64_t>(r);

    const Split split = holdout_split(corpus, spec.train_fraction, audit.seed);
    const Split sub = holdout_split(split.train, 1.0 - spec.validation_fraction_of_train,
                                    subsplit_seed(audit.seed));
    audit.train_sentences = split.train.size();
    audit.test_sentences = split.test.size();
    audit.train_fingerprint = fingerprint(split.train.sentences());

    const NgramTable build_table = count_ngrams(sub.train, options.max_order);
    const auto validation_cases = make_cases(sub.test, lengths, options.cases_per_length);

    audit.lambdas = options.fixed_lambdas.value_or(Lambdas{});
    if (wants_interpolation && !options.fixed_lambdas && !validation_cases.empty() &&
        !build_table.empty()) {
      std::vector<LabeledContext> labeled;
      labeled.reserve(validation_cases.size());
      for (const auto& c : validation_cases) {
        labeled.push_back({ContextWindow(c.fragment, context_width(build_table)), c.target});
      }
      audit.lambdas = fit_lambdas(build_table, labeled, options.grid_step);
    }

    const NgramTable final_table = count_ngrams(split.train, options.max_order);
    const auto test_cases = make_cases(split.test, lengths, options.cases_per_length);

    for (Method m : methods) {
      PredictorConfig config;
      config.method = m;
      config.alphas = options.alphas;
      config.lambdas = audit.lambdas;
      std::size_t total = 0;
      std::size_t correct = 0;
      if (!build_table.empty()) {
        correct = total_correct(evaluate(build_table, config, validation_cases), total);
      }
      audit.validation_accuracy[m] = total ? static_cast<double>(correct) / total : 0.0;
      audit.test_cells[m] = final_table.empty()
                                ? LengthCells{}
                                : evaluate(final_table, config, test_cases, options.top_k);
    }
    report.repeats.push_back(std::move(audit));
  }

  for (Method m : methods) {
    int best = 0;
    for (int r = 1; r < spec.repeats; ++r) {
      if (report.repeats[r].validation_accuracy[m] > report.repeats[best].validation_accuracy[m]) {
        best = r;
      }
    }
    report.selected_repeat[m] = best;
    LengthCells cells;
    const auto& chosen = report.repeats[best].test_cells[m];
    for (std::size_t len : lengths) {
      const auto it = chosen.find(len);
      cells[len] = it == chosen.end() ? Cell{} : it->second;
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [len, cell] : cells) {
      if (cell.total == 0) continue;
      sum += cell.accuracy();
      ++n;
    }
    if (n) report.averages[m] = sum / static_cast<double>(n);
    report.cells[m] = std::move(cells);
  }
  return report;
}

}  // namespace banglapredict
