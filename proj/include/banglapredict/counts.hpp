#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "banglapredict/corpus.hpp"

namespace banglapredict {

/// Tokens and/or pads. Pads may only form a leading prefix.
using Ngram = std::vector<std::string>;

struct Continuation {
  Token word;
  std::uint64_t count = 0;

  friend bool operator==(const Continuation&, const Continuation&) = default;
};

/// Outcome frequencies observed after one fixed context.
class ConditionalDistribution {
 public:
  ConditionalDistribution() = default;
  ConditionalDistribution(const ConditionalDistribution& other);
  ConditionalDistribution& operator=(const ConditionalDistribution& other);
  ConditionalDistribution(ConditionalDistribution&&) noexcept = default;
  ConditionalDistribution& operator=(ConditionalDistribution&&) noexcept = default;

  /// Continuations ranked by descending count, then ascending code point order.
  const std::vector<Continuation>& ranked() const noexcept { return ranked_; }
  /// Sum of all continuation counts (the MLE denominator).
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count(std::string_view word) const;
  std::size_t size() const noexcept { return ranked_.size(); }

  friend bool operator==(const ConditionalDistribution& a, const ConditionalDistribution& b) {
    return a.total_ == b.total_ && a.ranked_ == b.ranked_;
  }

 private:
  friend class NgramCounter;
  friend class NgramTable;

  std::vector<Continuation> ranked_;
  std::unordered_map<std::string_view, std::uint64_t> index_;  // views into ranked_
  std::uint64_t total_ = 0;

  void finalize();

};

/// Immutable n-gram counts for orders 1..max_order with start padding.
class NgramTable {
 public:
  explicit NgramTable(int max_order = 3);

  int max_order() const noexcept { return max_order_; }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  bool empty() const noexcept { return total_tokens_ == 0; }
  std::size_t vocabulary_size() const;
  bool in_vocabulary(std::string_view word) const;

  /// Stored count, 0 when absent. Throws QueryError for an empty n-gram,
  /// one longer than max_order, or one with a pad after a real token.
  std::uint64_t count(std::span<const std::string> ngram) const;

  /// Distribution over words following `context` (length < max_order),
  /// or nullptr when the context has no continuation. The empty context
  /// gives the unigram distribution.
  const ConditionalDistribution* continuations(std::span<const std::string> context) const;

  /// Number of distinct n-grams of one order.
  std::size_t ngram_count(int order) const;

  /// All n-grams of `order` with counts, sorted by code point order of the
  /// token sequence.
  std::vector<std::pair<Ngram, std::uint64_t>> entries(int order) const;

  friend bool operator==(const NgramTable& a, const NgramTable& b);

 private:
  friend class NgramCounter;

  int max_order_;
  std::uint64_t total_tokens_ = 0;
  // by_order_[k-1]: space-joined (k-1)-token context -> continuations.
  std::vector<std::unordered_map<std::string, ConditionalDistribution>> by_order_;
};

/// Mutable accumulator. Counting is additive, so partial counters over
/// disjoint sentence sets can be merged in any order.
class NgramCounter {
 public:
  explicit NgramCounter(int max_order);

  void add(const Sentence& sentence);
  void add(std::span<const Sentence> sentences);
  void add_ngram(std::span<const std::string> ngram, std::uint64_t count);
  void merge(const NgramCounter& other);
  NgramTable finish() const;

  int max_order() const noexcept { return max_order_; }

 private:
  int max_order_;
  // counts_[k-1]: space-joined k-gram -> count
  std::vector<std::unordered_map<std::string, std::uint64_t>> counts_;
};

/// Counts every padded window of orders 1..max_order in every sentence.
/// Throws ConfigError when max_order < 1.
NgramTable count_ngrams(const Corpus& corpus, int max_order = 3);

/// Validates the pad-prefix rule and length; throws QueryError.
void check_ngram(std::span<const std::string> ngram, int max_order);

void save_table(const NgramTable& table, std::ostream& sink);
NgramTable load_table(std::istream& source);

}  // namespace banglapredict
