#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "duet/error.hpp"
#include "duet/textpipe/embedding_init.hpp"
#include "duet/textpipe/idf.hpp"
#include "duet/textpipe/lexicon.hpp"
#include "duet/textpipe/readers.hpp"
#include "duet/textpipe/sequence.hpp"
#include "duet/textpipe/tokenizer.hpp"

using namespace duet;
using namespace duet::textpipe;

namespace {

using Tokens = std::vector<std::string>;

LineReader lines_of(const std::string& text) {
  return LineReader(std::make_unique<std::istringstream>(text), "mem");
}

std::string join(const Tokens& t) {
  std::string s;
  for (const auto& x : t) s += (s.empty() ? "" : " ") + x;
  return s;
}

std::vector<std::string> random_corpus(std::mt19937_64& rng, std::size_t passages) {
  static const char* words[] = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta", "iota", "kappa"};
  std::vector<std::string> corpus;
  for (std::size_t i = 0; i < passages; ++i) {
    std::string p;
    const auto n = 1 + rng() % 12;
    for (std::size_t j = 0; j < n; ++j) p += std::string(words[rng() % 10]) + (rng() % 3 ? " " : ", ");
    corpus.push_back(p);
  }
  return corpus;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("The cat, sat.") == Tokens{"the", "cat", "sat"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("BM25-based re-ranking") == Tokens{"bm25", "based", "re", "ranking"});
  CHECK(tokenize("  ...  ").empty());
  CHECK(tokenize("Ünïcode ÉCOLE straße") == Tokens{"ünïcode", "école", "straße"});
  CHECK(tokenize("東京 tower,big") == Tokens{"東京", "tower", "big"});
  CHECK(tokenize(std::string("ab\xff" "cd")) == Tokens{"ab", "cd"});

  std::mt19937_64 rng(8);
  for (const auto& s : random_corpus(rng, 50)) {
    const auto once = tokenize(s);
    CHECK(tokenize(join(once)) == once);
  }
}

TEST_CASE("build_vocabulary") {
  const std::vector<std::string> corpus{"a b", "a c"};
  auto v = build_vocabulary(corpus, 2);
  CHECK(v.size() == 4);
  CHECK(v.term(0) == "[PAD]");
  CHECK(v.term(1) == "[UNK]");
  CHECK(v.term(2) == "a");
  CHECK(v.term(3) == "b");
  CHECK(v.id("c") == Vocabulary::kUnk);

  auto all = build_vocabulary(corpus, 100);
  CHECK(all.size() == 5);

  CHECK_THROWS_AS(build_vocabulary(std::vector<std::string>{}, 10), FormatError);
  CHECK_THROWS_AS(build_vocabulary(corpus, 0), ParameterError);

  SUBCASE("independent of passage order and shard merging") {
    std::mt19937_64 rng(3);
    auto docs = random_corpus(rng, 40);
    auto a = build_vocabulary(docs, 6);
    std::shuffle(docs.begin(), docs.end(), rng);
    CollectionCounter left, right;
    for (std::size_t i = 0; i < docs.size(); ++i) (i % 2 ? left : right).add_passage(docs[i]);
    right.merge(left);
    CHECK(build_vocabulary(right, 6) == a);
  }
}

TEST_CASE("compute_idf") {
  CHECK(normalized_idf(1000, 10) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(normalized_idf(57, 57) == 0.0);
  CHECK(normalized_idf(57, 1) == 1.0);
  CHECK_THROWS_AS(normalized_idf(1, 1), FormatError);

  const std::vector<std::string> corpus{"x y y", "x z", "x"};
  auto idf = compute_idf(corpus);
  CHECK(idf.passages() == 3);
  CHECK(idf.tokens() == 6);
  CHECK(idf.idf("x") == 0.0);
  CHECK(idf.idf("y") == 1.0);
  CHECK(idf.document_frequency("y") == 1);
  CHECK(idf.idf("never-seen") == 1.0);
  CHECK_THROWS_AS(compute_idf(std::vector<std::string>{"only one"}), FormatError);

  std::mt19937_64 rng(21);
  auto docs = random_corpus(rng, 30);
  auto table = compute_idf(docs);
  for (const auto& [term, e] : table.entries()) {
    CHECK(e.idf >= 0.0);
    CHECK(e.idf <= 1.0);
    CHECK(e.document_frequency >= 1);
    CHECK(e.document_frequency <= table.passages());
  }
  for (std::uint64_t n = 1; n < 30; ++n) CHECK(normalized_idf(30, n + 1) < normalized_idf(30, n));
}

TEST_CASE("encode") {
  auto vocab = build_vocabulary(std::vector<std::string>{"one two three", "two three four"}, 10);
  std::string longq;
  for (int i = 0; i < 25; ++i) longq += "w" + std::to_string(i) + " ";
  auto q = encode(longq, kQueryCapacity, vocab);
  CHECK(q.length() == 20);
  CHECK(q.capacity() == 20);
  CHECK(q.tokens.back() == "w19");

  auto empty = encode("", kPassageCapacity, vocab);
  CHECK(empty.length() == 0);
  CHECK(std::all_of(empty.ids.begin(), empty.ids.end(), [](auto id) { return id == Vocabulary::kPad; }));

  auto oov = encode("two mystery", 5, vocab);
  CHECK(oov.ids[0] == vocab.id("two"));
  CHECK(oov.ids[1] == Vocabulary::kUnk);
  CHECK(oov.tokens[1] == "mystery");
  CHECK(oov.ids[2] == Vocabulary::kPad);
  for (auto id : oov.ids) CHECK(static_cast<std::size_t>(id) < vocab.size());
}

TEST_CASE("lexicon persistence reproduces tables exactly") {
  std::mt19937_64 rng(5);
  auto docs = random_corpus(rng, 25);
  Lexicon lex{build_vocabulary(docs, 4), compute_idf(docs)};
  std::stringstream buf;
  write_lexicon(buf, lex);
  CHECK(buf.str().rfind("#N=25\n", 0) == 0);
  auto back = read_lexicon(buf);
  CHECK(back.vocab == lex.vocab);
  CHECK(back.idf == lex.idf);

  std::stringstream again;
  write_lexicon(again, back);
  CHECK(again.str() == buf.str());

  std::istringstream bad("#N=3\nfoo\t2\t1\n");
  CHECK_THROWS_AS(read_lexicon(bad), FormatError);
}

TEST_CASE("embedding init") {
  auto vocab = build_vocabulary(std::vector<std::string>{"apple banana", "cherry apple"}, 10);
  std::istringstream file("banana 0.5 -1.25 3\nzzz 1 1 1\napple 1e-3 2 -0.5\n");
  auto init = load_embedding_init(file, vocab, 3, 42);
  CHECK(init.covered == 2);
  const auto row = [&](std::string_view term) {
    const auto r = static_cast<std::size_t>(vocab.id(term)) * 3;
    return std::vector<float>(init.table.begin() + r, init.table.begin() + r + 3);
  };
  CHECK(row("banana") == std::vector<float>{0.5f, -1.25f, 3.0f});
  CHECK(row("apple") == std::vector<float>{1e-3f, 2.0f, -0.5f});
  CHECK(row("[PAD]") == std::vector<float>{0, 0, 0});
  for (float v : row("cherry")) CHECK(std::abs(v) <= 0.05f);

  std::istringstream same("banana 0.5 -1.25 3\nzzz 1 1 1\napple 1e-3 2 -0.5\n");
  CHECK(load_embedding_init(same, vocab, 3, 42).table == init.table);

  std::istringstream wrong("banana 0.5 -1.25 3\napple 1 2\n");
  try {
    load_embedding_init(wrong, vocab, 3, 42, "vec.txt");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("vec.txt:2") != std::string::npos);
  }
}

TEST_CASE("readers") {
  SUBCASE("triples") {
    TripleReader r(lines_of("what is x\tx is a letter\tbananas are yellow\n"));
    auto t = r.next();
    REQUIRE(t);
    CHECK(t->query == "what is x");
    CHECK(t->positive == "x is a letter");
    CHECK(t->negative == "bananas are yellow");
    CHECK_FALSE(r.next());

    TripleReader bad(lines_of("ok\tok\tok\nonly\ttwo\n"));
    CHECK(bad.next());
    try {
      bad.next();
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("mem:2") != std::string::npos);
    }
  }
  SUBCASE("triples round trip") {
    std::mt19937_64 rng(12);
    auto docs = random_corpus(rng, 30);
    std::vector<Triple> written;
    std::string file;
    for (std::size_t i = 0; i + 2 < docs.size(); i += 3) {
      written.push_back({docs[i], docs[i + 1], docs[i + 2]});
      file += format_triple(written.back()) + "\n";
    }
    TripleReader r(lines_of(file));
    std::vector<Triple> read;
    while (auto t = r.next()) read.push_back(*t);
    CHECK(read == written);
  }
  SUBCASE("qrels") {
    QrelsReader r(lines_of("3 0 7 1\n4\t0\t9\t0\n"));
    auto a = r.next();
    REQUIRE(a);
    CHECK(a->query_id == 3);
    CHECK(a->passage_id == 7);
    CHECK(a->relevant());
    CHECK_FALSE(r.next()->relevant());
    QrelsReader bad(lines_of("3 0 x 1\n"));
    CHECK_THROWS_AS(bad.next(), FormatError);
  }
  SUBCASE("candidates") {
    CandidateReader r(lines_of("1\t10\tq text\tp text\n1\tnope\tq\tp\n"));
    auto a = r.next();
    REQUIRE(a);
    CHECK(a->passage_id == 10);
    CHECK(a->passage == "p text");
    CHECK_THROWS_AS(r.next(), FormatError);
  }
  SUBCASE("collection with and without ids") {
    CollectionReader r(lines_of("12\tfirst passage\nsecond\tpassage\nthird\n"));
    CHECK(*r.next() == "first passage");
    CHECK(*r.next() == "second\tpassage");
    CHECK(*r.next() == "third");
  }
  CHECK_THROWS_AS(TripleReader(std::filesystem::path("/nonexistent/file.tsv")), IoError);
}
