#include <doctest.h>

#include <random>
#include <sstream>

#include "banglapredict/counts.hpp"
#include "banglapredict/error.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace banglapredict;

namespace {

const std::string S(kPad);

Corpus abc_abd() { return Corpus({{"a", "b", "c"}, {"a", "b", "d"}}); }

NgramTable load_from(const std::string& text) {
  std::istringstream in(text);
  return load_table(in);
}

std::size_t load_error_line(const std::string& text) {
  try {
    load_from(text);
  } catch (const LoadError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_CASE("count_ngrams on the two-sentence example") {
  const auto t = count_ngrams(abc_abd(), 2);
  CHECK(t.count(Ngram{S, "a"}) == 2);
  CHECK(t.count(Ngram{"a", "b"}) == 2);
  CHECK(t.count(Ngram{"b", "c"}) == 1);
  CHECK(t.count(Ngram{"b", "d"}) == 1);
  CHECK(t.count(Ngram{"a"}) == 2);
  CHECK(t.count(Ngram{"b"}) == 2);
  CHECK(t.count(Ngram{"c"}) == 1);
  CHECK(t.count(Ngram{"d"}) == 1);
  CHECK(t.total_tokens() == 6);
  CHECK(t.vocabulary_size() == 4);
  CHECK(t.count(Ngram{"zzz"}) == 0);
  CHECK(t.count(Ngram{"c", "a"}) == 0);
}

TEST_CASE("count_ngrams edge cases") {
  const auto empty = count_ngrams(Corpus{}, 3);
  CHECK(empty.empty());
  CHECK(empty.total_tokens() == 0);
  CHECK(empty.continuations({}) == nullptr);

  const auto x = count_ngrams(Corpus({{"x"}}), 3);
  CHECK(x.count(Ngram{S, S, "x"}) == 1);
  CHECK(x.count(Ngram{S, "x"}) == 1);
  CHECK(x.count(Ngram{"x"}) == 1);

  CHECK_THROWS_AS(count_ngrams(abc_abd(), 0), ConfigError);
}

TEST_CASE("count queries validate n-gram shape") {
  const auto t = count_ngrams(abc_abd(), 2);
  CHECK_THROWS_AS(t.count(Ngram{"a", "b", "c"}), QueryError);
  CHECK_THROWS_AS(t.count(Ngram{}), QueryError);
  CHECK_THROWS_AS(t.count(Ngram{"a", S}), QueryError);
  CHECK_THROWS_AS(t.continuations(Ngram{"a", "b"}), QueryError);
}

TEST_CASE("continuations expose conditional frequency distributions") {
  const auto t = count_ngrams(abc_abd(), 2);
  const auto* b = t.continuations(Ngram{"b"});
  REQUIRE(b != nullptr);
  CHECK(b->ranked() == std::vector<Continuation>{{"c", 1}, {"d", 1}});
  CHECK(b->total() == 2);
  CHECK(t.continuations(Ngram{"c"}) == nullptr);  // sentence-final only

  const auto* all = t.continuations({});
  REQUIRE(all != nullptr);
  CHECK(all->total() == 6);
  CHECK(all->ranked().front() == Continuation{"a", 2});

  const auto mini = count_ngrams(bp_test::mini_corpus(), 3);
  CHECK(mini.continuations(Ngram{"দেশের", "বৃহত্তম"}) == nullptr);
}

TEST_CASE("property: window identity, monotonicity and brute-force recount") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 200; ++iter) {
    const auto corpus = bp_test::random_corpus(rng);
    const int max_order = 1 + static_cast<int>(rng() % 4);
    const auto t = count_ngrams(corpus, max_order);
    const bp_test::BruteForceModel oracle(corpus, max_order);

    for (int k = 1; k <= max_order; ++k) {
      std::uint64_t sum = 0;
      for (const auto& [g, c] : t.entries(k)) {
        CHECK(c >= 1);
        CHECK(static_cast<std::int64_t>(c) == oracle.count(g));
        sum += c;
        if (k >= 2 && g.front() != S) {
          const Ngram history(g.begin(), g.end() - 1);
          CHECK(c <= t.count(history));
        }
      }
      CHECK(sum == corpus.token_count());
    }
    CHECK(t.total_tokens() == corpus.token_count());
  }
}

TEST_CASE("parallel counting merges to the same table") {
  std::mt19937_64 rng(5);
  std::vector<Sentence> many;
  for (int i = 0; i < 25000; ++i) {
    Sentence s;
    for (int j = 0, n = 1 + static_cast<int>(rng() % 6); j < n; ++j) {
      s.push_back(bp_test::six_symbols()[rng() % 6]);
    }
    many.push_back(std::move(s));
  }
  const Corpus corpus(many);
  NgramCounter serial(3);
  serial.add(corpus.sentences());
  CHECK(count_ngrams(corpus, 3) == serial.finish());
}

TEST_CASE("save/load round trip and deterministic layout") {
  const auto t = count_ngrams(abc_abd(), 2);
  std::ostringstream out;
  save_table(t, out);
  CHECK(out.str() ==
        "ngram-counts v1 max_order=2 total_tokens=6\n"
        "1\ta\t2\n1\tb\t2\n1\tc\t1\n1\td\t1\n"
        "2\t<s> a\t2\n2\ta b\t2\n2\tb c\t1\n2\tb d\t1\n");
  CHECK(load_from(out.str()) == t);

  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 50; ++iter) {
    const auto r = count_ngrams(bp_test::random_corpus(rng), 1 + static_cast<int>(rng() % 3));
    std::ostringstream o;
    save_table(r, o);
    CHECK(load_from(o.str()) == r);
  }
}

TEST_CASE("load_table rejects malformed files with line numbers") {
  const std::string header = "ngram-counts v1 max_order=2 total_tokens=1\n";
  CHECK(load_error_line(header + "1\ta\t0\n") == 2);
  CHECK(load_error_line(header + "1\ta\t1\n1\ta\t1\n") == 3);
  CHECK(load_error_line(header + "1\ta\tone\n") == 2);
  CHECK(load_error_line(header + "3\ta b c\t1\n") == 2);
  CHECK(load_error_line(header + "1 a 1\n") == 2);
  CHECK(load_error_line(header + "2\ta\t1\n") == 2);
  CHECK(load_error_line(header + "2\ta <s>\t1\n") == 2);
  CHECK(load_error_line("counts v2\n") == 1);
  CHECK(load_error_line("") == 1);
  // Declared total disagrees with the unigram sum.
  CHECK(load_error_line(header + "1\ta\t2\n") == 1);
}
