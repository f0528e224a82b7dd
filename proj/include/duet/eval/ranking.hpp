#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "duet/model/duet_model.hpp"
#include "duet/textpipe/readers.hpp"
#include "duet/textpipe/vocabulary.hpp"

namespace duet::eval {

struct Candidate {
  std::int64_t passage_id = 0;
  std::string text;
};

// One query's candidate pool. Passage ids are unique within it.
struct CandidateSet {
  std::int64_t query_id = 0;
  std::string query;
  std::vector<Candidate> passages;
};

struct ScoredPassage {
  std::int64_t passage_id = 0;
  double score = 0.0;
  friend bool operator==(const ScoredPassage&, const ScoredPassage&) = default;
};

// Descending score, ties by ascending passage id.
struct RankedList {
  std::int64_t query_id = 0;
  std::vector<ScoredPassage> entries;
  friend bool operator==(const RankedList&, const RankedList&) = default;
};

using Run = std::vector<RankedList>;

// Groups qid/pid/query/passage records by query in order of first
// appearance. Throws ContractError on a repeated passage id within a query.
std::vector<CandidateSet> group_candidates(textpipe::CandidateReader& reader);
std::vector<CandidateSet> load_candidates(const std::filesystem::path& path);

RankedList sort_ranked(std::int64_t query_id, std::vector<ScoredPassage> scores);

// Arithmetic mean per passage over models; the result follows the first
// list's order. Throws ContractError unless every list covers the same
// passage ids.
std::vector<ScoredPassage> ensemble_scores(std::span<const std::vector<ScoredPassage>> per_model);

// Scores every candidate with each model in inference mode, fuses the
// per-model scores by mean and sorts.
RankedList rank_candidates(std::span<const model::DuetModel<float>* const> models, const CandidateSet& candidates,
                           const textpipe::Vocabulary& vocab, const textpipe::IdfTable& idf);

// rank_candidates over many queries on up to `jobs` threads; the result is
// in input order and independent of `jobs`.
Run rank_all(std::span<const model::DuetModel<float>* const> models, std::span<const CandidateSet> queries,
             const textpipe::Vocabulary& vocab, const textpipe::IdfTable& idf, std::size_t jobs = 1);

}  // namespace duet::eval
