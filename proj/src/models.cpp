#include "banglapredict/models.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>
#include <unordered_set>

#include "banglapredict/error.hpp"

namespace banglapredict {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

bool ranks_before(const Suggestion& a, const Suggestion& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.word < b.word;
}

void require_order(const NgramTable& table, int order) {
  if (order < 1 || order > table.max_order()) {
    throw QueryError("order " + std::to_string(order) + " not available (table max order " +
                     std::to_string(table.max_order()) + ")");
  }
}

std::span<const std::string> context_for(const NgramTable& table, int order,
                                         const ContextWindow& context) {
  require_order(table, order);
  const auto need = static_cast<std::size_t>(order - 1);
  if (context.width() < need) {
    throw QueryError("context window of width " + std::to_string(context.width()) +
                     " is too narrow for order " + std::to_string(order));
  }
  return context.suffix(need);
}

// Continuation distribution for an order, or nullptr when the order exceeds
// the table or the context was never followed by anything.
const ConditionalDistribution* dist_at(const NgramTable& table, int order,
                                       const ContextWindow& context) {
  if (order > table.max_order()) return nullptr;
  return table.continuations(context_for(table, order, context));
}

double prob_in(const ConditionalDistribution* dist, std::string_view word) {
  return dist ? ratio(dist->count(word), dist->total()) : 0.0;
}

// Candidate words for interpolation with their component probabilities.
struct Candidate {
  std::string_view word;
  double p3 = 0.0;
  double p2 = 0.0;
  double p1 = 0.0;
};

struct InterpolationInputs {
  std::vector<Candidate> higher;  // words continuing the trigram or bigram context
  std::vector<Candidate> unigram_only;  // first words by unigram rank not in `higher`
};

InterpolationInputs gather_candidates(const NgramTable& table, const ContextWindow& context,
                                      std::size_t unigram_fallback) {
  const auto* d3 = dist_at(table, 3, context);
  const auto* d2 = dist_at(table, 2, context);
  const auto* d1 = dist_at(table, 1, context);
  InterpolationInputs in;
  std::unordered_set<std::string_view> seen;
  auto add = [&](const ConditionalDistribution* d) {
    if (!d) return;
    for (const auto& c : d->ranked()) {
      if (!seen.insert(c.word).second) continue;
      in.higher.push_back({c.word, prob_in(d3, c.word), prob_in(d2, c.word), prob_in(d1, c.word)});
    }
  };
  add(d3);
  add(d2);
  if (d1) {
    for (const auto& c : d1->ranked()) {
      if (in.unigram_only.size() >= unigram_fallback) break;
      if (seen.count(c.word)) continue;
      in.unigram_only.push_back({c.word, 0.0, 0.0, ratio(c.count, d1->total())});
    }
  }
  return in;
}

int highest_order(const Candidate& c) {
  if (c.p3 > 0) return 3;
  if (c.p2 > 0) return 2;
  return 1;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::unigram: return "unigram";
    case Method::bigram: return "bigram";
    case Method::trigram: return "trigram";
    case Method::backoff: return "backoff";
    case Method::interpolation: return "interpolation";
  }
  return "unknown";
}

std::string_view method_label(Method m) {
  switch (m) {
    case Method::unigram: return "Unigram";
    case Method::bigram: return "Bigram";
    case Method::trigram: return "Trigram";
    case Method::backoff: return "Backoff";
    case Method::interpolation: return "Deleted Interpolation";
  }
  return "Unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

void Lambdas::validate() const {
  if (!(trigram >= 0 && bigram >= 0 && unigram >= 0)) {
    throw ConfigError("interpolation weights must be non-negative");
  }
  const double sum = trigram + bigram + unigram;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("interpolation weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

void PredictorConfig::validate(int max_order) const {
  lambdas.validate();
  if (k < 1) throw ConfigError("k must be a positive integer");
  if (alphas.size() > static_cast<std::size_t>(std::max(max_order - 1, 0))) {
    throw ConfigError("expected at most " + std::to_string(max_order - 1) + " backoff alphas");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("backoff alphas must lie in [0, 1]");
  }
}

ContextWindow::ContextWindow(std::span<const Token> fragment, std::size_t width) {
  items_.reserve(width);
  const std::size_t have = std::min(width, fragment.size());
  for (std::size_t i = have; i < width; ++i) items_.emplace_back(kPad);
  for (std::size_t i = fragment.size() - have; i < fragment.size(); ++i) {
    items_.push_back(fragment[i]);
  }
}

std::span<const std::string> ContextWindow::suffix(std::size_t n) const {
  if (n > items_.size()) throw QueryError("suffix longer than context window");
  return std::span<const std::string>(items_).last(n);
}

std::size_t context_width(const NgramTable& table) {
  return static_cast<std::size_t>(std::max(table.max_order(), 3) - 1);
}

double mle_prob(const NgramTable& table, int order, const ContextWindow& context,
                std::string_view word) {
  const auto* dist = table.continuations(context_for(table, order, context));
  return prob_in(dist, word);
}

double sentence_prob(const NgramTable& table, int order, const Sentence& sentence) {
  require_order(table, order);
  double product = 1.0;
  const auto width = static_cast<std::size_t>(order - 1);
  const std::span<const Token> all(sentence);
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    const ContextWindow window(all.first(i), width);
    product *= mle_prob(table, order, window, sentence[i]);
    if (product == 0.0) break;
  }
  return product;
}

double sentence_prob(const NgramTable& table, Method method, const Sentence& sentence) {
  switch (method) {
    case Method::unigram: return sentence_prob(table, 1, sentence);
    case Method::bigram: return sentence_prob(table, 2, sentence);
    case Method::trigram: return sentence_prob(table, 3, sentence);
    default: throw ConfigError("sentence scoring supports unigram, bigram and trigram only");
  }
}

std::vector<Suggestion> predict_mle(const NgramTable& table, int order,
                                    const ContextWindow& context, std::size_t k) {
  std::vector<Suggestion> out;
  const auto* dist = table.continuations(context_for(table, order, context));
  if (!dist) return out;
  for (const auto& c : dist->ranked()) {
    if (out.size() >= k) break;
    out.push_back({c.word, ratio(c.count, dist->total()), order});
  }
  return out;
}

std::vector<Suggestion> predict_backoff(const NgramTable& table, const ContextWindow& context,
                                        std::size_t k, std::span<const double> alphas) {
  if (table.empty()) throw NoModelError("backoff prediction needs a non-empty table");
  double multiplier = 1.0;
  for (int order = table.max_order(); order >= 1; --order) {
    auto out = predict_mle(table, order, context, k);
    if (!out.empty()) {
      for (auto& s : out) s.score *= multiplier;
      return out;
    }
    const auto step = static_cast<std::size_t>(table.max_order() - order);
    multiplier *= step < alphas.size() ? alphas[step] : 1.0;
  }
  return {};
}

double interpolate(const Lambdas& lambdas, double p_trigram, double p_bigram, double p_unigram) {
  return lambdas.trigram * p_trigram + lambdas.bigram * p_bigram + lambdas.unigram * p_unigram;
}

double interp_prob(const NgramTable& table, const ContextWindow& context, std::string_view word,
                   const Lambdas& lambdas) {
  lambdas.validate();
  return interpolate(lambdas, prob_in(dist_at(table, 3, context), word),
                     prob_in(dist_at(table, 2, context), word),
                     prob_in(dist_at(table, 1, context), word));
}

std::vector<Suggestion> predict_interpolation(const NgramTable& table,
                                              const ContextWindow& context, std::size_t k,
                                              const Lambdas& lambdas) {
  lambdas.validate();
  const auto in = gather_candidates(table, context, k);
  std::vector<Suggestion> out;
  out.reserve(in.higher.size() + in.unigram_only.size());
  for (const auto* group : {&in.higher, &in.unigram_only}) {
    for (const auto& c : *group) {
      const double score = interpolate(lambdas, c.p3, c.p2, c.p1);
      if (score > 0.0) out.push_back({std::string(c.word), score, highest_order(c)});
    }
  }
  const auto keep = std::min(k, out.size());
  std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(),
                    ranks_before);
  out.resize(keep);
  return out;
}

std::vector<Lambdas> lambda_grid(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) throw ConfigError("grid_step must lie in (0, 0.5]");
  const double steps_real = 1.0 / grid_step;
  const auto steps = static_cast<int>(std::lround(steps_real));
  if (std::abs(steps_real - steps) > 1e-9) {
    throw ConfigError("grid_step must divide 1 evenly");
  }
  std::vector<Lambdas> grid;
  for (int m1 = steps; m1 >= 0; --m1) {
    for (int m2 = steps - m1; m2 >= 0; --m2) {
      const int m3 = steps - m1 - m2;
      grid.push_back({static_cast<double>(m1) / steps, static_cast<double>(m2) / steps,
                      static_cast<double>(m3) / steps});
    }
  }
  return grid;
}

Lambdas fit_lambdas(const NgramTable& table, std::span<const LabeledContext> validation,
                    double grid_step) {
  if (validation.empty()) throw ConfigError("lambda fitting needs a non-empty validation set");
  const auto grid = lambda_grid(grid_step);

  // Only the best unigram-only word can ever be a top-1 prediction.
  std::vector<InterpolationInputs> inputs;
  inputs.reserve(validation.size());
  for (const auto& v : validation) inputs.push_back(gather_candidates(table, v.context, 1));

  auto accuracy = [&](const Lambdas& l) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const Candidate* best = nullptr;
      double best_score = 0.0;
      for (const auto* group : {&inputs[i].higher, &inputs[i].unigram_only}) {
        for (const auto& c : *group) {
          const double s = interpolate(l, c.p3, c.p2, c.p1);
          if (s <= 0.0) continue;
          if (!best || s > best_score || (s == best_score && c.word < best->word)) {
            best = &c;
            best_score = s;
          }
        }
      }
      if (best && best->word == validation[i].target) ++correct;
    }
    return correct;
  };

  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), grid.size());
  std::vector<std::size_t> scores(grid.size());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t g = w; g < grid.size(); g += workers) scores[g] = accuracy(grid[g]);
    }));
  }
  for (auto& j : jobs) j.get();

  // The grid is enumerated with (trigram, bigram) descending, so the first
  // maximum is the lexicographically largest one.
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (scores[g] > scores[best]) best = g;
  }
  return grid[best];
}

std::vector<Suggestion> predict(const NgramTable& table, const PredictorConfig& config,
                                std::span<const Token> fragment) {
  if (table.empty()) throw NoModelError("prediction needs a non-empty table");
  config.validate(table.max_order());
  const ContextWindow window(fragment, context_width(table));
  const auto k = static_cast<std::size_t>(config.k);
  switch (config.method) {
    case Method::unigram: return predict_mle(table, 1, window, k);
    case Method::bigram: return predict_mle(table, 2, window, k);
    case Method::trigram: return predict_mle(table, 3, window, k);
    case Method::backoff: return predict_backoff(table, window, k, config.alphas);
    case Method::interpolation: return predict_interpolation(table, window, k, config.lambdas);
  }
  return {};
}

}  // namespace banglapredict
