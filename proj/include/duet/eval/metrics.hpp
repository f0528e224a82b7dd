#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>

#include "duet/eval/ranking.hpp"

namespace duet::eval {

inline constexpr std::size_t kDefaultCutoff = 10;

// query id -> relevant passage ids. Only queries with at least one relevant
// passage are judged.
using Qrels = std::map<std::int64_t, std::set<std::int64_t>>;

Qrels read_qrels(textpipe::QrelsReader& reader);
Qrels load_qrels(const std::filesystem::path& path);

// 1/r for the first relevant passage at 1-based rank r <= k, else 0.
// Throws ParameterError for k < 1.
double reciprocal_rank_at_k(const RankedList& ranked, const std::set<std::int64_t>& relevant,
                            std::size_t k = kDefaultCutoff);

struct MrrResult {
  double value = 0.0;
  std::size_t k = kDefaultCutoff;
  std::size_t judged_queries = 0;
  std::size_t missing_queries = 0;  // judged but absent from the run; scored 0
};

// Mean over judged queries. Throws FormatError when qrels judge nothing and
// ContractError when the run lists a query twice.
MrrResult mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k = kDefaultCutoff);

// {"metric": "mrr@k", "value", "judged_queries", "missing_queries"}
void write_metrics(std::ostream& out, const MrrResult& result);

}  // namespace duet::eval
