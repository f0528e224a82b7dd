#include "duet/eval/bm25.hpp"

#include <cmath>

#include "duet/error.hpp"
#include "duet/textpipe/collection.hpp"
#include "duet/textpipe/tokenizer.hpp"

namespace duet::eval {

void Bm25Params::validate() const {
  if (!(k1 >= 0)) throw ParameterError("bm25: k1 must be non-negative");
  if (!(b >= 0 && b <= 1)) throw ParameterError("bm25: b must lie in [0, 1]");
}

Bm25Scorer::Bm25Scorer(const textpipe::IdfTable& stats, Bm25Params params)
    : stats_(stats), params_(params), avgdl_(stats.average_length()) {
  params_.validate();
  if (!(avgdl_ > 0)) throw FormatError("bm25: collection statistics have no tokens");
}

double Bm25Scorer::idf(const std::string& term) const {
  const double n = static_cast<double>(stats_.passages());
  const double nt = static_cast<double>(stats_.document_frequency(term));
  return std::log((n - nt + 0.5) / (nt + 0.5) + 1.0);
}

double Bm25Scorer::score(const std::vector<std::string>& query, const std::vector<std::string>& passage) const {
  textpipe::StringMap<std::size_t> tf;
  for (const auto& t : passage) ++tf[t];
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * static_cast<double>(passage.size()) / avgdl_);
  double total = 0.0;
  for (const auto& t : query) {
    auto it = tf.find(t);
    if (it == tf.end()) continue;
    const double f = static_cast<double>(it->second);
    total += idf(t) * f * (params_.k1 + 1.0) / (f + norm);
  }
  return total;
}

RankedList rank_bm25(const Bm25Scorer& scorer, const CandidateSet& candidates) {
  const auto q = textpipe::tokenize(candidates.query);
  std::vector<ScoredPassage> scores;
  scores.reserve(candidates.passages.size());
  for (const auto& p : candidates.passages)
    scores.push_back({p.passage_id, scorer.score(q, textpipe::tokenize(p.text))});
  return sort_ranked(candidates.query_id, std::move(scores));
}

}  // namespace duet::eval
