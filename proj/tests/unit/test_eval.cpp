#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "duet/error.hpp"
#include "duet/eval/bm25.hpp"
#include "duet/eval/metrics.hpp"
#include "duet/eval/ranking.hpp"
#include "duet/eval/run_io.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "tiny_model.hpp"

using namespace duet;
using namespace duet::eval;

namespace {

std::vector<std::int64_t> ids_of(const RankedList& r) {
  std::vector<std::int64_t> out;
  for (const auto& e : r.entries) out.push_back(e.passage_id);
  return out;
}

RankedList ranked(std::int64_t qid, std::vector<std::int64_t> ids) {
  RankedList r{qid, {}};
  double s = static_cast<double>(ids.size());
  for (auto id : ids) r.entries.push_back({id, s--});
  return r;
}

textpipe::IdfTable stats(std::uint64_t passages, std::uint64_t tokens,
                         std::initializer_list<std::pair<std::string, std::uint64_t>> df) {
  textpipe::StringMap<textpipe::IdfEntry> entries;
  for (const auto& [t, n] : df) entries.emplace(t, textpipe::IdfEntry{n, 0.0});
  return textpipe::IdfTable(passages, tokens, std::move(entries));
}

}  // namespace

TEST_CASE("sort_ranked: descending score, ties by ascending id") {
  auto r = sort_ranked(1, {{10, 0.3}, {20, 0.9}});
  CHECK(ids_of(r) == std::vector<std::int64_t>{20, 10});
  r = sort_ranked(1, {{7, 0.5}, {4, 0.5}, {9, 0.7}});
  CHECK(ids_of(r) == std::vector<std::int64_t>{9, 4, 7});
  CHECK(sort_ranked(1, {}).entries.empty());
}

TEST_CASE("reciprocal rank point cases") {
  std::vector<std::int64_t> ids(20);
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<std::int64_t>(100 + i);
  const auto r = ranked(1, ids);
  CHECK(reciprocal_rank_at_k(r, {100}, 10) == 1.0);
  CHECK(reciprocal_rank_at_k(r, {103}, 10) == 0.25);
  CHECK(reciprocal_rank_at_k(r, {110}, 10) == 0.0);
  CHECK(reciprocal_rank_at_k(r, {110}, 11) == 1.0 / 11.0);
  CHECK(reciprocal_rank_at_k(r, {103, 105}, 10) == 0.25);
  CHECK(reciprocal_rank_at_k(r, {999}, 10) == 0.0);
  CHECK_THROWS_AS(reciprocal_rank_at_k(r, {100}, 0), ParameterError);
}

TEST_CASE("mrr_at_k") {
  const Run run = {ranked(1, {5, 6, 7}), ranked(2, {8, 9})};
  CHECK(mrr_at_k(run, {{1, {5}}, {2, {9}}}).value == 0.75);

  std::vector<std::int64_t> deep(15);
  for (std::size_t i = 0; i < deep.size(); ++i) deep[i] = static_cast<std::int64_t>(i);
  CHECK(mrr_at_k({ranked(1, deep)}, {{1, {12, 14}}}).value == 0.0);

  const auto missing = mrr_at_k(run, {{1, {5}}, {3, {1}}});
  CHECK(missing.value == 0.5);
  CHECK(missing.judged_queries == 2);
  CHECK(missing.missing_queries == 1);

  CHECK_THROWS_AS(mrr_at_k(run, {}), FormatError);
  CHECK_THROWS_AS(mrr_at_k({ranked(1, {1}), ranked(1, {2})}, {{1, {1}}}), ContractError);
}

TEST_CASE("mrr_at_k: brute-force oracle and invariants on random runs") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t queries = 1 + rng() % 20;
    Run run;
    Qrels qrels;
    std::vector<std::vector<std::pair<std::int64_t, double>>> raw;
    for (std::size_t q = 0; q < queries; ++q) {
      const std::size_t n = 1 + rng() % 40;
      std::vector<ScoredPassage> scores;
      std::vector<std::pair<std::int64_t, double>> pairs;
      for (std::size_t i = 0; i < n; ++i) {
        // coarse scores force ties
        const double s = std::round(u(rng) * 2) / 2;
        scores.push_back({static_cast<std::int64_t>(i * 3 + 1), s});
        pairs.emplace_back(scores.back().passage_id, s);
      }
      run.push_back(sort_ranked(static_cast<std::int64_t>(q), scores));
      raw.push_back(pairs);
      if (rng() % 5 != 0) {
        auto& rel = qrels[static_cast<std::int64_t>(q)];
        const std::size_t nrel = 1 + rng() % 3;
        for (std::size_t j = 0; j < nrel; ++j) rel.insert(static_cast<std::int64_t>((rng() % n) * 3 + 1));
      }
    }
    qrels[1000].insert(1);  // judged but never ranked
    for (std::size_t k : {1u, 5u, 10u, 100u}) {
      double want = 0;
      for (const auto& [qid, rel] : qrels)
        if (qid < static_cast<std::int64_t>(queries)) want += duet::testing::brute_force_rr(raw[qid], rel, k);
      want /= static_cast<double>(qrels.size());
      const auto got = mrr_at_k(run, qrels, k);
      CHECK(std::abs(got.value - want) < 1e-12);
      CHECK(got.value >= 0.0);
      CHECK(got.value <= 1.0);
      CHECK(got.missing_queries == 1);
    }
    CHECK(mrr_at_k(run, qrels, 5).value <= mrr_at_k(run, qrels, 10).value);

    // Strictly monotone transform of every score leaves MRR unchanged.
    Run transformed;
    for (const auto& list : run) {
      std::vector<ScoredPassage> s;
      for (const auto& e : list.entries) s.push_back({e.passage_id, std::exp(3 * e.score) - 7});
      transformed.push_back(sort_ranked(list.query_id, s));
    }
    CHECK(mrr_at_k(transformed, qrels).value == mrr_at_k(run, qrels).value);
  }
}

TEST_CASE("ensemble_scores") {
  const std::vector<ScoredPassage> a = {{1, 0.2}, {2, 0.9}, {3, -0.4}, {4, 0.9}};
  SUBCASE("identical models reproduce the single-model ranking") {
    std::vector<std::vector<ScoredPassage>> eight(8, a);
    CHECK(ids_of(sort_ranked(1, ensemble_scores(eight))) == ids_of(sort_ranked(1, a)));
  }
  SUBCASE("opposite scores tie and fall back to passage id") {
    std::vector<std::vector<ScoredPassage>> two = {{{2, 1.0}, {1, 0.0}}, {{2, 0.0}, {1, 1.0}}};
    const auto fused = ensemble_scores(two);
    CHECK(fused[0].score == 0.5);
    CHECK(fused[1].score == 0.5);
    CHECK(ids_of(sort_ranked(1, fused)) == std::vector<std::int64_t>{1, 2});
  }
  SUBCASE("shifting one model by a constant shifts fused scores by c/n") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<std::vector<ScoredPassage>> models(8);
    for (auto& m : models)
      for (std::int64_t id = 0; id < 30; ++id) m.push_back({id, u(rng)});
    const auto base = ensemble_scores(models);
    models[3] = [&] {
      auto shifted = models[3];
      for (auto& s : shifted) s.score += 2.5;
      return shifted;
    }();
    const auto moved = ensemble_scores(models);
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(moved[i].score == doctest::Approx(base[i].score + 2.5 / 8));
    CHECK(ids_of(sort_ranked(1, moved)) == ids_of(sort_ranked(1, base)));
  }
  SUBCASE("mismatched candidate sets are a contract error") {
    std::vector<std::vector<ScoredPassage>> bad = {a, {{1, 0}, {2, 0}, {3, 0}, {5, 0}}};
    CHECK_THROWS_AS(ensemble_scores(bad), ContractError);
    std::vector<std::vector<ScoredPassage>> shorter = {a, {{1, 0}}};
    CHECK_THROWS_AS(ensemble_scores(shorter), ContractError);
    CHECK_THROWS_AS(ensemble_scores({}), ContractError);
  }
}

TEST_CASE("rank_candidates with a model") {
  const auto vocab = duet::testing::tiny_vocab();
  const auto idf = duet::testing::tiny_idf();
  model::DuetModel<float> m(duet::testing::tiny_config());
  std::mt19937_64 rng(5);
  CandidateSet set{42, "apple bread", {}};
  for (std::int64_t i = 0; i < 50; ++i)
    set.passages.push_back({1000 - i, duet::testing::join(duet::testing::random_tokens(rng, 8))});
  const model::DuetModel<float>* one[] = {&m};
  const auto r = rank_candidates(one, set, vocab, idf);
  CHECK(r.query_id == 42);
  auto got = ids_of(r);
  std::vector<std::int64_t> want;
  for (const auto& p : set.passages) want.push_back(p.passage_id);
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  CHECK(got == want);
  for (std::size_t i = 1; i < r.entries.size(); ++i) {
    const auto &a = r.entries[i - 1], &b = r.entries[i];
    CHECK((a.score > b.score || (a.score == b.score && a.passage_id < b.passage_id)));
  }

  const model::DuetModel<float>* eight[] = {&m, &m, &m, &m, &m, &m, &m, &m};
  CHECK(ids_of(rank_candidates(eight, set, vocab, idf)) == ids_of(r));

  CHECK(rank_candidates(one, CandidateSet{1, "apple", {}}, vocab, idf).entries.empty());

  std::vector<CandidateSet> many(9, set);
  for (std::size_t i = 0; i < many.size(); ++i) many[i].query_id = static_cast<std::int64_t>(i);
  CHECK(rank_all(one, many, vocab, idf, 4) == rank_all(one, many, vocab, idf, 1));
}

TEST_CASE("group_candidates") {
  std::istringstream text("1\t10\tq one\tp a\n1\t11\tq one\tp b\n2\t10\tq two\tp a\n1\t12\tq one\tp c\n");
  textpipe::CandidateReader reader(textpipe::LineReader(std::make_unique<std::istringstream>(text.str()), "c"));
  const auto sets = group_candidates(reader);
  REQUIRE(sets.size() == 2);
  CHECK(sets[0].query_id == 1);
  CHECK(sets[0].query == "q one");
  CHECK(sets[0].passages.size() == 3);
  CHECK(sets[1].passages.size() == 1);

  textpipe::CandidateReader dup(
      textpipe::LineReader(std::make_unique<std::istringstream>("1\t10\tq\tp\n1\t10\tq\tp\n"), "d"));
  CHECK_THROWS_AS(group_candidates(dup), ContractError);
}

TEST_CASE("bm25") {
  SUBCASE("no overlap scores zero") {
    const auto s = stats(10, 50, {{"a", 2}, {"b", 3}});
    Bm25Scorer bm25(s);
    CHECK(bm25.score({"a", "b"}, {"c", "d"}) == 0.0);
  }
  SUBCASE("single-passage corpus: hand value") {
    const auto s = stats(1, 1, {{"a", 1}});
    Bm25Scorer bm25(s);
    // idf = log((1 - 1 + 0.5) / 1.5 + 1) = log(4/3); tf 1, |d| = avgdl
    const double want = std::log(4.0 / 3.0) * 1.0 * 1.9 / (1.0 + 0.9);
    CHECK(bm25.score({"a"}, {"a"}) == doctest::Approx(want).epsilon(1e-15));
  }
  SUBCASE("nested-loop oracle") {
    const auto s = stats(100, 700, {{"a", 5}, {"b", 40}, {"c", 99}, {"d", 1}});
    const Bm25Params p{1.2, 0.75};
    Bm25Scorer bm25(s, p);
    std::mt19937_64 rng(3);
    const char* words[] = {"a", "b", "c", "d", "e"};
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<std::string> q(1 + rng() % 4), d(1 + rng() % 12);
      for (auto& t : q) t = words[rng() % 5];
      for (auto& t : d) t = words[rng() % 5];
      double want = 0;
      for (const auto& t : q) {
        double tf = 0;
        for (const auto& u : d) tf += (u == t);
        if (tf == 0) continue;
        const double nt = static_cast<double>(s.document_frequency(t));
        const double idf = std::log((100 - nt + 0.5) / (nt + 0.5) + 1);
        want += idf * tf * (p.k1 + 1) / (tf + p.k1 * (1 - p.b + p.b * static_cast<double>(d.size()) / 7.0));
      }
      CHECK(bm25.score(q, d) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  SUBCASE("duplicated query term doubles its contribution") {
    const auto s = stats(10, 50, {{"a", 2}, {"b", 3}});
    Bm25Scorer bm25(s);
    const std::vector<std::string> d = {"a", "b", "b", "x"};
    CHECK(bm25.score({"a", "a"}, d) == doctest::Approx(2 * bm25.score({"a"}, d)));
    CHECK(bm25.score({"a", "b"}, d) == doctest::Approx(bm25.score({"a"}, d) + bm25.score({"b"}, d)));
  }
  SUBCASE("parameter validation") {
    const auto s = stats(10, 50, {});
    CHECK_THROWS_AS(Bm25Scorer(s, {-1, 0.4}), ParameterError);
    CHECK_THROWS_AS(Bm25Scorer(s, {0.9, 1.5}), ParameterError);
  }
  SUBCASE("ranking candidates") {
    const auto s = stats(10, 40, {{"apple", 2}});
    Bm25Scorer bm25(s);
    const auto r = rank_bm25(bm25, {1, "apple", {{5, "pear"}, {6, "apple pie"}, {7, "apple"}}});
    CHECK(ids_of(r) == std::vector<std::int64_t>{7, 6, 5});
  }
}

TEST_CASE("run files") {
  SUBCASE("one query, one passage") {
    std::ostringstream out;
    write_run(out, {ranked(3, {7})}, RunFormat::trec, "toy");
    CHECK(out.str() == "3 Q0 7 1 1.000000 toy\n");
  }
  SUBCASE("marco line") {
    std::ostringstream out;
    write_run(out, {ranked(3, {9, 7})}, RunFormat::marco);
    CHECK(out.str() == "3\t9\t1\n3\t7\t2\n");
  }
  SUBCASE("trec round trip keeps the ranking") {
    std::mt19937_64 rng(8);
    Run run;
    for (std::int64_t q = 0; q < 5; ++q) {
      std::vector<ScoredPassage> s;
      for (std::int64_t i = 0; i < 12; ++i) s.push_back({i, static_cast<double>(rng() % 5)});
      run.push_back(sort_ranked(q * 11, s));
    }
    for (auto format : {RunFormat::trec, RunFormat::marco}) {
      std::stringstream buf;
      write_run(buf, run, format);
      const auto back = read_run(buf, "mem");
      REQUIRE(back.size() == run.size());
      for (std::size_t i = 0; i < run.size(); ++i) {
        CHECK(back[i].query_id == run[i].query_id);
        CHECK(ids_of(back[i]) == ids_of(run[i]));
      }
      Qrels qrels{{0, {3}}, {11, {5, 6}}, {44, {0}}};
      CHECK(mrr_at_k(back, qrels).value == mrr_at_k(run, qrels).value);
    }
  }
  SUBCASE("parse errors name the line") {
    std::istringstream in("1 Q0 5 1 0.5 r\n1 Q0 x 2 0.4 r\n");
    try {
      (void)read_run(in, "run.txt");
      FAIL("bad run accepted");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("run.txt:2") != std::string::npos);
    }
    std::istringstream wrong("1 2\n");
    CHECK_THROWS_AS(read_run(wrong, "w"), FormatError);
  }
  SUBCASE("format names") {
    CHECK(parse_run_format("marco") == RunFormat::marco);
    CHECK_THROWS_AS(parse_run_format("csv"), ParameterError);
  }
}
