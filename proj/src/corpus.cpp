#include "banglapredict/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "banglapredict/error.hpp"

namespace banglapredict {

namespace {

constexpr UChar32 kDanda = 0x0964;

bool is_sentence_delimiter(UChar32 c) {
  return c == kDanda || c == '?' || c == '!' || c == '.';
}

bool is_line_break(UChar32 c) {
  return c == '\n' || c == '\r' || c == 0x0B || c == 0x0C || c == 0x85 || c == 0x2028 ||
         c == 0x2029;
}

bool is_edge_punct(UChar32 c) {
  switch (c) {
    case '"': case '\'': case '(': case ')': case ',': case '-': case ':': case ';':
    case '[': case ']': case '{': case '}': case 0x00AB: case 0x00BB: case 0x2026:
    case 0x0965:  // double danda
      return true;
    default:
      return (c >= 0x2010 && c <= 0x2015) || (c >= 0x2018 && c <= 0x201F);
  }
}

// Decodes one code point at `pos`; the input must already be valid UTF-8.
UChar32 next_code_point(std::string_view s, std::size_t& pos) {
  UChar32 c;
  auto i = static_cast<int32_t>(pos);
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i, static_cast<int32_t>(s.size()), c);
  pos = static_cast<std::size_t>(i);
  return c;
}

std::string_view trim_whitespace(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end) {
    std::size_t pos = begin;
    if (!u_isUWhiteSpace(next_code_point(s, pos))) break;
    begin = pos;
  }
  while (end > begin) {
    std::size_t start = end - 1;
    while (start > begin && U8_IS_TRAIL(static_cast<uint8_t>(s[start]))) --start;
    std::size_t pos = start;
    if (!u_isUWhiteSpace(next_code_point(s, pos))) break;
    end = start;
  }
  return s.substr(begin, end - begin);
}

std::string_view strip_edge_punct(std::string_view s) {
  while (!s.empty()) {
    std::size_t pos = 0;
    if (!is_edge_punct(next_code_point(s, pos))) break;
    s.remove_prefix(pos);
  }
  while (!s.empty()) {
    std::size_t start = s.size() - 1;
    while (start > 0 && U8_IS_TRAIL(static_cast<uint8_t>(s[start]))) --start;
    std::size_t pos = start;
    if (!is_edge_punct(next_code_point(s, pos))) break;
    s.remove_suffix(s.size() - start);
  }
  return s;
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace

Corpus::Corpus(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {
  std::unordered_set<std::string_view> forms;
  for (const auto& s : sentences_) {
    token_count_ += s.size();
    for (const auto& t : s) forms.insert(t);
  }
  word_form_count_ = forms.size();
}

Corpus operator+(const Corpus& a, const Corpus& b) {
  std::vector<Sentence> all = a.sentences_;
  all.insert(all.end(), b.sentences_.begin(), b.sentences_.end());
  return Corpus(std::move(all));
}

void validate_utf8(std::string_view text) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw IngestionError("invalid UTF-8 at byte offset " + std::to_string(start),
                           static_cast<std::size_t>(start));
    }
  }
}

std::string normalize_nfc(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
  const icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (nfc->isNormalized(src, status) && U_SUCCESS(status)) return std::string(text);
  status = U_ZERO_ERROR;
  const icu::UnicodeString out = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::vector<std::string> segment_sentences(std::string_view text) {
  validate_utf8(text);
  std::vector<std::string> out;
  std::size_t seg_start = 0;
  std::size_t pos = 0;
  auto flush = [&](std::size_t seg_end) {
    const auto seg = trim_whitespace(text.substr(seg_start, seg_end - seg_start));
    if (!seg.empty()) out.emplace_back(seg);
  };
  while (pos < text.size()) {
    const std::size_t start = pos;
    const UChar32 c = next_code_point(text, pos);
    if (is_sentence_delimiter(c) || is_line_break(c)) {
      flush(start);
      seg_start = pos;
    }
  }
  flush(text.size());
  return out;
}

std::optional<Sentence> tokenize(std::string_view raw_sentence) {
  validate_utf8(raw_sentence);
  Sentence tokens;
  std::size_t pos = 0;
  std::size_t piece_start = 0;
  auto emit = [&](std::size_t piece_end) {
    const auto piece = strip_edge_punct(raw_sentence.substr(piece_start, piece_end - piece_start));
    if (piece.empty()) return;
    std::string token = normalize_nfc(piece);
    if (token == kPad) token = kEscapedPad;
    tokens.push_back(std::move(token));
  };
  while (pos < raw_sentence.size()) {
    const std::size_t start = pos;
    const UChar32 c = next_code_point(raw_sentence, pos);
    if (u_isUWhiteSpace(c) || is_sentence_delimiter(c) || is_line_break(c)) {
      emit(start);
      piece_start = pos;
    }
  }
  emit(raw_sentence.size());
  if (tokens.empty()) return std::nullopt;
  return tokens;
}

Sentence tokenize_fragment(std::string_view text) {
  validate_utf8(text);
  // Find the byte just after the last sentence boundary.
  std::size_t tail_start = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const UChar32 c = next_code_point(text, pos);
    if (is_sentence_delimiter(c) || is_line_break(c)) tail_start = pos;
  }
  auto tokens = tokenize(text.substr(tail_start));
  return tokens ? std::move(*tokens) : Sentence{};
}

Corpus load_corpus(std::istream& source) {
  std::string text((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
  if (source.bad()) throw IngestionError("I/O failure while reading corpus");
  std::size_t bom = 0;
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) bom = 3;
  const std::string_view body = std::string_view(text).substr(bom);
  try {
    validate_utf8(body);
  } catch (const IngestionError& e) {
    throw IngestionError("invalid UTF-8 at byte offset " + std::to_string(e.byte_offset() + bom),
                         e.byte_offset() + bom);
  }
  std::vector<Sentence> sentences;
  for (const auto& raw : segment_sentences(body)) {
    if (auto s = tokenize(raw)) sentences.push_back(std::move(*s));
  }
  return Corpus(std::move(sentences));
}

Corpus load_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open corpus file: " + path);
  return load_corpus(in);
}

std::uint64_t fingerprint(std::span<const Sentence> sentences) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char b) {
    h ^= b;
    h *= 0x100000001b3ULL;
  };
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      for (unsigned char b : t) mix(b);
      mix(0x1F);
    }
    mix(0x1E);
  }
  return h;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace banglapredict
