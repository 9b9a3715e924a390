#include "banglapredict/counts.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "banglapredict/error.hpp"

namespace banglapredict {

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

constexpr std::string_view kHeaderPrefix = "ngram-counts v1 ";

}  // namespace

// ---------------------------------------------------------------------------
// ConditionalDistribution

ConditionalDistribution::ConditionalDistribution(const ConditionalDistribution& other)
    : ranked_(other.ranked_), total_(other.total_) {
  for (const auto& c : ranked_) index_.emplace(c.word, c.count);
}

ConditionalDistribution& ConditionalDistribution::operator=(const ConditionalDistribution& other) {
  if (this != &other) {
    ConditionalDistribution tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

std::uint64_t ConditionalDistribution::count(std::string_view word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? 0 : it->second;
}

void ConditionalDistribution::finalize() {
  std::sort(ranked_.begin(), ranked_.end(), [](const Continuation& a, const Continuation& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
  index_.clear();
  index_.reserve(ranked_.size());
  total_ = 0;
  for (const auto& c : ranked_) {
    index_.emplace(c.word, c.count);
    total_ += c.count;
  }
}

// ---------------------------------------------------------------------------
// NgramTable

NgramTable::NgramTable(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw ConfigError("max_order must be >= 1, got " + std::to_string(max_order));
  by_order_.resize(static_cast<std::size_t>(max_order));
}

void check_ngram(std::span<const std::string> ngram, int max_order) {
  if (ngram.empty()) throw QueryError("empty n-gram");
  if (ngram.size() > static_cast<std::size_t>(max_order)) {
    throw QueryError("n-gram of length " + std::to_string(ngram.size()) +
                     " exceeds max order " + std::to_string(max_order));
  }
  bool seen_token = false;
  for (const auto& item : ngram) {
    if (item.empty()) throw QueryError("empty token in n-gram");
    if (item == kPad) {
      if (seen_token) throw QueryError("pad marker after a real token");
    } else {
      seen_token = true;
    }
  }
  if (!seen_token) throw QueryError("n-gram consists only of pads");
}

std::size_t NgramTable::vocabulary_size() const {
  const auto it = by_order_[0].find("");
  return it == by_order_[0].end() ? 0 : it->second.size();
}

bool NgramTable::in_vocabulary(std::string_view word) const {
  const auto it = by_order_[0].find("");
  return it != by_order_[0].end() && it->second.count(word) > 0;
}

std::uint64_t NgramTable::count(std::span<const std::string> ngram) const {
  check_ngram(ngram, max_order_);
  const auto* dist = continuations(ngram.first(ngram.size() - 1));
  return dist ? dist->count(ngram.back()) : 0;
}

const ConditionalDistribution* NgramTable::continuations(
    std::span<const std::string> context) const {
  if (context.size() >= static_cast<std::size_t>(max_order_)) {
    throw QueryError("context of length " + std::to_string(context.size()) +
                     " needs max order > " + std::to_string(max_order_));
  }
  const auto& level = by_order_[context.size()];
  const auto it = level.find(join_tokens(context));
  return it == level.end() ? nullptr : &it->second;
}

std::size_t NgramTable::ngram_count(int order) const {
  if (order < 1 || order > max_order_) return 0;
  std::size_t n = 0;
  for (const auto& [ctx, dist] : by_order_[static_cast<std::size_t>(order - 1)]) n += dist.size();
  return n;
}

std::vector<std::pair<Ngram, std::uint64_t>> NgramTable::entries(int order) const {
  std::vector<std::pair<Ngram, std::uint64_t>> out;
  if (order < 1 || order > max_order_) return out;
  for (const auto& [ctx, dist] : by_order_[static_cast<std::size_t>(order - 1)]) {
    Ngram prefix = ctx.empty() ? Ngram{} : split(ctx, ' ');
    for (const auto& c : dist.ranked()) {
      Ngram g = prefix;
      g.push_back(c.word);
      out.emplace_back(std::move(g), c.count);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

bool operator==(const NgramTable& a, const NgramTable& b) {
  return a.max_order_ == b.max_order_ && a.total_tokens_ == b.total_tokens_ &&
         a.by_order_ == b.by_order_;
}

// ---------------------------------------------------------------------------
// NgramCounter

NgramCounter::NgramCounter(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw ConfigError("max_order must be >= 1, got " + std::to_string(max_order));
  counts_.resize(static_cast<std::size_t>(max_order));
}

void NgramCounter::add(const Sentence& sentence) {
  std::vector<std::string_view> padded;
  padded.reserve(sentence.size() + static_cast<std::size_t>(max_order_) - 1);
  for (int i = 0; i < max_order_ - 1; ++i) padded.push_back(kPad);
  for (const auto& t : sentence) padded.emplace_back(t);

  const std::size_t offset = static_cast<std::size_t>(max_order_) - 1;
  std::string key;
  for (std::size_t pos = 0; pos < sentence.size(); ++pos) {
    const std::size_t last = offset + pos;
    for (std::size_t k = 1; k <= static_cast<std::size_t>(max_order_); ++k) {
      key.clear();
      for (std::size_t j = last + 1 - k; j <= last; ++j) {
        if (j != last + 1 - k) key += ' ';
        key += padded[j];
      }
      ++counts_[k - 1][key];
    }
  }
}

void NgramCounter::add(std::span<const Sentence> sentences) {
  for (const auto& s : sentences) add(s);
}

void NgramCounter::add_ngram(std::span<const std::string> ngram, std::uint64_t count) {
  check_ngram(ngram, max_order_);
  counts_[ngram.size() - 1][join_tokens(ngram)] += count;
}

void NgramCounter::merge(const NgramCounter& other) {
  if (other.max_order_ != max_order_) throw ConfigError("cannot merge counters of different order");
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    for (const auto& [key, c] : other.counts_[k]) counts_[k][key] += c;
  }
}

NgramTable NgramCounter::finish() const {
  NgramTable table(max_order_);
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    auto& level = table.by_order_[k];
    for (const auto& [key, c] : counts_[k]) {
      if (c == 0) continue;
      const auto space = key.rfind(' ');
      std::string ctx = space == std::string::npos ? std::string() : key.substr(0, space);
      std::string word = space == std::string::npos ? key : key.substr(space + 1);
      level[std::move(ctx)].ranked_.push_back({std::move(word), c});
    }
    for (auto& [ctx, dist] : level) dist.finalize();
  }
  const auto it = table.by_order_[0].find("");
  table.total_tokens_ = it == table.by_order_[0].end() ? 0 : it->second.total();
  return table;
}

NgramTable count_ngrams(const Corpus& corpus, int max_order) {
  NgramCounter counter(max_order);
  const auto& sentences = corpus.sentences();
  constexpr std::size_t kParallelThreshold = 20000;
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
  if (sentences.size() < kParallelThreshold || workers < 2) {
    counter.add(sentences);
    return counter.finish();
  }
  const std::size_t chunk = (sentences.size() + workers - 1) / workers;
  std::vector<std::future<NgramCounter>> parts;
  for (std::size_t begin = 0; begin < sentences.size(); begin += chunk) {
    const auto span = std::span<const Sentence>(sentences).subspan(
        begin, std::min(chunk, sentences.size() - begin));
    parts.push_back(std::async(std::launch::async, [span, max_order] {
      NgramCounter partial(max_order);
      partial.add(span);
      return partial;
    }));
  }
  for (auto& p : parts) counter.merge(p.get());
  return counter.finish();
}

// ---------------------------------------------------------------------------
// Persistence

void save_table(const NgramTable& table, std::ostream& sink) {
  sink << kHeaderPrefix << "max_order=" << table.max_order()
       << " total_tokens=" << table.total_tokens() << '\n';
  for (int order = 1; order <= table.max_order(); ++order) {
    for (const auto& [ngram, c] : table.entries(order)) {
      sink << order << '\t' << join_tokens(ngram) << '\t' << c << '\n';
    }
  }
  if (!sink) throw std::runtime_error("failed to write count table");
}

NgramTable load_table(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) throw LoadError("missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::uint64_t max_order = 0;
  std::uint64_t declared_total = 0;
  {
    const auto fields = split(line, ' ');
    if (fields.size() != 4 || fields[0] != "ngram-counts" || fields[1] != "v1" ||
        fields[2].rfind("max_order=", 0) != 0 || fields[3].rfind("total_tokens=", 0) != 0 ||
        !parse_u64(std::string_view(fields[2]).substr(10), max_order) ||
        !parse_u64(std::string_view(fields[3]).substr(13), declared_total) || max_order < 1 ||
        max_order > 64) {
      throw LoadError("malformed header: " + line, 1);
    }
  }

  NgramCounter counter(static_cast<int>(max_order));
  std::set<std::string> seen;
  std::uint64_t unigram_total = 0;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) throw LoadError("expected 3 tab-separated fields", line_no);
    std::uint64_t order = 0;
    if (!parse_u64(fields[0], order) || order < 1) throw LoadError("bad order: " + fields[0], line_no);
    if (order > max_order) {
      throw LoadError("order " + fields[0] + " exceeds declared max_order", line_no);
    }
    std::uint64_t c = 0;
    if (!parse_u64(fields[2], c)) throw LoadError("non-integer count: " + fields[2], line_no);
    if (c < 1) throw LoadError("count must be >= 1", line_no);
    const auto tokens = split(fields[1], ' ');
    if (tokens.size() != order) throw LoadError("token count does not match order", line_no);
    try {
      check_ngram(tokens, static_cast<int>(max_order));
    } catch (const QueryError& e) {
      throw LoadError(e.what(), line_no);
    }
    if (!seen.insert(fields[0] + '\t' + fields[1]).second) {
      throw LoadError("duplicate n-gram: " + fields[1], line_no);
    }
    if (order == 1) unigram_total += c;
    counter.add_ngram(tokens, c);
  }
  if (source.bad()) throw LoadError("I/O failure while reading count table", line_no);
  if (unigram_total != declared_total) {
    throw LoadError("total_tokens=" + std::to_string(declared_total) +
                        " does not match unigram sum " + std::to_string(unigram_total),
                    1);
  }
  return counter.finish();
}

}  // namespace banglapredict
