#pragma once

#include <string>
#include <vector>

#include "duet/eval/ranking.hpp"
#include "duet/textpipe/idf.hpp"

namespace duet::eval {

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
  void validate() const;  // k1 >= 0, 0 <= b <= 1; throws ParameterError
};

// Okapi BM25 with the Robertson-Sparck Jones IDF
// log((N - n_t + 0.5) / (n_t + 0.5) + 1), using N, n_t and the average
// passage length from the collection statistics. Each query token
// occurrence contributes separately.
class Bm25Scorer {
 public:
  // `stats` must outlive the scorer.
  Bm25Scorer(const textpipe::IdfTable& stats, Bm25Params params = {});

  double idf(const std::string& term) const;
  double score(const std::vector<std::string>& query, const std::vector<std::string>& passage) const;

 private:
  const textpipe::IdfTable& stats_;
  Bm25Params params_;
  double avgdl_;
};

RankedList rank_bm25(const Bm25Scorer& scorer, const CandidateSet& candidates);

}  // namespace duet::eval
