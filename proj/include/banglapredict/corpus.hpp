#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace banglapredict {

// A word form: non-empty NFC UTF-8 text with no whitespace and no
// sentence-terminal punctuation. Produced only by tokenize().
using Token = std::string;
using Sentence = std::vector<Token>;

/// Reserved start-of-sentence pad. Never a Token: a literal "<s>" in input
/// text is ingested as kEscapedPad.
inline constexpr std::string_view kPad = "<s>";
inline constexpr std::string_view kEscapedPad = "\\<s>";

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Sentence> sentences);

  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
  std::size_t size() const noexcept { return sentences_.size(); }
  bool empty() const noexcept { return sentences_.empty(); }
  std::uint64_t token_count() const noexcept { return token_count_; }
  std::uint64_t word_form_count() const noexcept { return word_form_count_; }

  /// Concatenation; statistics are recomputed.
  friend Corpus operator+(const Corpus& a, const Corpus& b);

 private:
  std::vector<Sentence> sentences_;
  std::uint64_t token_count_ = 0;
  std::uint64_t word_form_count_ = 0;
};

/// Throws IngestionError carrying the offset of the first invalid byte.
void validate_utf8(std::string_view text);

/// NFC-normalizes valid UTF-8. Returns the input unchanged when already NFC.
std::string normalize_nfc(std::string_view text);

/// Splits at every danda (U+0964), '?', '!', '.' and line break. Delimiters
/// are removed and whitespace-only segments dropped.
std::vector<std::string> segment_sentences(std::string_view text);

/// Whitespace split, edge punctuation stripped, NFC applied. Returns
/// std::nullopt when no token survives.
std::optional<Sentence> tokenize(std::string_view raw_sentence);

/// Tokens of the sentence being typed: everything after the last sentence
/// boundary in `text`. Empty when the text ends at a boundary.
Sentence tokenize_fragment(std::string_view text);

Corpus load_corpus(std::istream& source);
Corpus load_corpus_file(const std::string& path);

/// FNV-1a over sentence contents. Order-sensitive.
std::uint64_t fingerprint(std::span<const Sentence> sentences);

std::string join_tokens(std::span<const std::string> tokens);

}  // namespace banglapredict
