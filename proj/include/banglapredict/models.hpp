#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "banglapredict/corpus.hpp"
#include "banglapredict/counts.hpp"

namespace banglapredict {

enum class Method { unigram, bigram, trigram, backoff, interpolation };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::unigram, Method::bigram, Method::trigram, Method::backoff, Method::interpolation};

std::string_view method_name(Method m);
/// Title-case label used in rendered reports ("Deleted Interpolation").
std::string_view method_label(Method m);
std::optional<Method> parse_method(std::string_view name);

/// Deleted-interpolation weights for the trigram, bigram and unigram terms.
struct Lambdas {
  double trigram = 0.5;
  double bigram = 0.33;
  double unigram = 0.17;

  /// Throws ConfigError unless all weights are >= 0 and sum to 1 within 1e-9.
  void validate() const;

  friend bool operator==(const Lambdas&, const Lambdas&) = default;
};

struct PredictorConfig {
  Method method = Method::backoff;
  /// Backoff multipliers; alphas[j] scales the step from order N-j to N-j-1.
  /// Empty means all 1.0.
  std::vector<double> alphas;
  Lambdas lambdas;
  int k = 5;

  /// Throws ConfigError on out-of-range fields or an alpha vector longer
  /// than max_order - 1.
  void validate(int max_order) const;

  friend bool operator==(const PredictorConfig&, const PredictorConfig&) = default;
};

/// `key = value` lines; keys method, k, alpha.<n>, lambda.1..3. Blank lines
/// and `#` comments are skipped. Throws LoadError on unknown keys or bad values.
PredictorConfig load_config(std::istream& source);
void save_config(const PredictorConfig& config, std::ostream& sink);

struct Suggestion {
  Token word;
  double score = 0.0;
  int order_used = 1;

  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

/// The last `width` items of a fragment, left-padded with kPad.
class ContextWindow {
 public:
  ContextWindow(std::span<const Token> fragment, std::size_t width);

  std::size_t width() const noexcept { return items_.size(); }
  std::span<const std::string> items() const noexcept { return items_; }
  /// Trailing `n` items (n <= width).
  std::span<const std::string> suffix(std::size_t n) const;

 private:
  std::vector<std::string> items_;
};

/// Width needed to run every method against `table` (at least 2).
std::size_t context_width(const NgramTable& table);

/// Maximum-likelihood estimate of `word` after the trailing order-1 items of
/// `context`. Order 1 is count/total_tokens. Zero for unseen events and for
/// contexts without continuations.
double mle_prob(const NgramTable& table, int order, const ContextWindow& context,
                std::string_view word);

/// Chain product of MLE factors over the padded sentence at `order`.
double sentence_prob(const NgramTable& table, int order, const Sentence& sentence);
/// `method` must be unigram, bigram or trigram.
double sentence_prob(const NgramTable& table, Method method, const Sentence& sentence);

std::vector<Suggestion> predict_mle(const NgramTable& table, int order,
                                    const ContextWindow& context, std::size_t k);

/// Highest order whose context has continuations supplies every suggestion.
/// Throws NoModelError on an empty table.
std::vector<Suggestion> predict_backoff(const NgramTable& table, const ContextWindow& context,
                                        std::size_t k, std::span<const double> alphas = {});

/// lambdas.trigram * p3 + lambdas.bigram * p2 + lambdas.unigram * p1.
double interpolate(const Lambdas& lambdas, double p_trigram, double p_bigram, double p_unigram);

double interp_prob(const NgramTable& table, const ContextWindow& context, std::string_view word,
                   const Lambdas& lambdas);

/// Ranks the union of continuations of all three orders by interp_prob.
/// Zero-scored words are never suggested.
std::vector<Suggestion> predict_interpolation(const NgramTable& table,
                                              const ContextWindow& context, std::size_t k,
                                              const Lambdas& lambdas);

struct LabeledContext {
  ContextWindow context;
  Token target;
};

/// Simplex grid search maximizing top-1 interpolation accuracy on
/// `validation`. Ties go to the lexicographically largest (trigram, bigram).
Lambdas fit_lambdas(const NgramTable& table, std::span<const LabeledContext> validation,
                    double grid_step = 0.05);

/// Every weight triple on the simplex grid with spacing `grid_step`.
std::vector<Lambdas> lambda_grid(double grid_step);

std::vector<Suggestion> predict(const NgramTable& table, const PredictorConfig& config,
                                std::span<const Token> fragment);

}  // namespace banglapredict
