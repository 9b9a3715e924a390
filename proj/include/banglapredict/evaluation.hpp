#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "banglapredict/corpus.hpp"
#include "banglapredict/counts.hpp"
#include "banglapredict/models.hpp"

namespace banglapredict {

struct SplitSpec {
  double train_fraction = 2.0 / 3.0;
  double validation_fraction_of_train = 1.0 / 3.0;
  std::uint64_t seed = 0;
  int repeats = 5;

  void validate() const;
};

struct Split {
  Corpus train;
  Corpus test;
};

/// Deterministic shuffle seeded by `seed`; the first ceil(fraction * n)
/// sentences go to train. Throws EvaluationError below 3 sentences.
Split holdout_split(const Corpus& corpus, double train_fraction, std::uint64_t seed);
Split holdout_split(const Corpus& corpus, const SplitSpec& spec);

/// Fragment is every token but the last; the last is the target.
struct EvalCase {
  Sentence fragment;
  Token target;
  std::size_t length = 0;
};

inline constexpr std::size_t kCasesPerLength = 100;

/// Default sentence lengths: 5..17, 19, 20.
std::set<std::size_t> default_lengths();

/// One case per sentence whose length is in `lengths`, at most `cap` per
/// length, in corpus order.
std::vector<EvalCase> make_cases(const Corpus& test, const std::set<std::size_t>& lengths,
                                 std::size_t cap = kCasesPerLength);

struct Cell {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t correct_in_top_k = 0;

  double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

using LengthCells = std::map<std::size_t, Cell>;

/// Top-1 exact match per case; an empty prediction is wrong. When top_k > 1
/// the cells also count targets found anywhere in the first top_k.
LengthCells evaluate(const NgramTable& table, const PredictorConfig& config,
                     std::span<const EvalCase> cases, std::size_t top_k = 1);

struct EvalOptions {
  int max_order = 3;
  double grid_step = 0.05;
  std::size_t cases_per_length = kCasesPerLength;
  std::size_t top_k = 1;
  std::vector<double> alphas;
  /// Skips fitting when set.
  std::optional<Lambdas> fixed_lambdas;
};

struct RepeatAudit {
  int repeat = 0;
  std::uint64_t seed = 0;
  std::size_t train_sentences = 0;
  std::size_t test_sentences = 0;
  std::uint64_t train_fingerprint = 0;
  Lambdas lambdas;
  std::map<Method, double> validation_accuracy;
  std::map<Method, LengthCells> test_cells;
};

struct EvalReport {
  SplitSpec spec;
  EvalOptions options;
  std::vector<Method> methods;
  std::vector<std::size_t> lengths;
  std::map<Method, LengthCells> cells;
  /// Unweighted mean over non-empty length cells. Absent when all are empty.
  std::map<Method, double> averages;
  std::map<Method, int> selected_repeat;
  std::vector<RepeatAudit> repeats;
};

/// Repeated holdout: per repeat, split with seed + r, fit lambdas and score
/// methods on a validation subsplit, score on the untouched test split.
/// Each method reports the test cells of its best validation repeat.
EvalReport repeated_holdout(const Corpus& corpus, const SplitSpec& spec,
                            std::span<const Method> methods,
                            const std::set<std::size_t>& lengths, const EvalOptions& options = {});

struct RenderedReport {
  std::string table_text;        // report.txt
  std::string by_length_csv;     // accuracy_by_length.csv
  std::string average_csv;       // accuracy_average.csv
};

RenderedReport render_report(const EvalReport& report);
void write_report(const RenderedReport& rendered, const std::filesystem::path& directory);

}  // namespace banglapredict
