#pragma once

#include <random>
#include <string>
#include <vector>

#include "banglapredict/corpus.hpp"

namespace bp_test {

inline std::string data_path(const std::string& name) {
  return std::string(BP_TEST_DATA_DIR) + "/" + name;
}

/// Miniature corpus: (দায়িত্বপ্রাপ্ত সহকারী) -> কমিশনার,
/// বৃহত্তম -> পর্বতমালা 33 of 100, দেশের বৃহত্তম only sentence-finally,
/// ও the most frequent word.
inline banglapredict::Corpus mini_corpus() {
  return banglapredict::load_corpus_file(data_path("mini_corpus.txt"));
}

inline const std::vector<std::string>& six_symbols() {
  static const std::vector<std::string> alphabet = {"ক", "খ", "গ", "ঘ", "ঙ", "চ"};
  return alphabet;
}

/// Random corpus of at most `max_tokens` tokens over a small alphabet.
inline banglapredict::Corpus random_corpus(std::mt19937_64& rng, std::size_t max_tokens = 50,
                                           const std::vector<std::string>& alphabet = six_symbols()) {
  std::vector<banglapredict::Sentence> sentences;
  std::size_t budget = 1 + rng() % max_tokens;
  while (budget > 0) {
    const std::size_t len = std::min<std::size_t>(budget, 1 + rng() % 8);
    banglapredict::Sentence s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    sentences.push_back(std::move(s));
    budget -= len;
  }
  return banglapredict::Corpus(std::move(sentences));
}

}  // namespace bp_test
