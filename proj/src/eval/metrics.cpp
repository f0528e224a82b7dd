#include "duet/eval/metrics.hpp"

#include <ostream>
#include <unordered_map>

#include <json.hpp>

#include "duet/error.hpp"

namespace duet::eval {

Qrels read_qrels(textpipe::QrelsReader& reader) {
  Qrels qrels;
  while (auto rec = reader.next())
    if (rec->relevant()) qrels[rec->query_id].insert(rec->passage_id);
  return qrels;
}

Qrels load_qrels(const std::filesystem::path& path) {
  textpipe::QrelsReader reader(path);
  return read_qrels(reader);
}

double reciprocal_rank_at_k(const RankedList& ranked, const std::set<std::int64_t>& relevant, std::size_t k) {
  if (k < 1) throw ParameterError("cutoff k must be at least 1");
  const std::size_t depth = std::min(k, ranked.entries.size());
  for (std::size_t r = 0; r < depth; ++r)
    if (relevant.contains(ranked.entries[r].passage_id)) return 1.0 / static_cast<double>(r + 1);
  return 0.0;
}

MrrResult mrr_at_k(const Run& run, const Qrels& qrels, std::size_t k) {
  if (qrels.empty()) throw FormatError("qrels judge no queries");
  if (k < 1) throw ParameterError("cutoff k must be at least 1");
  std::unordered_map<std::int64_t, const RankedList*> by_query;
  for (const auto& list : run)
    if (!by_query.emplace(list.query_id, &list).second)
      throw ContractError("run lists query " + std::to_string(list.query_id) + " more than once");

  MrrResult result;
  result.k = k;
  double total = 0.0;
  for (const auto& [qid, relevant] : qrels) {  // ascending qid: fixed summation order
    ++result.judged_queries;
    auto it = by_query.find(qid);
    if (it == by_query.end()) {
      ++result.missing_queries;
      continue;
    }
    total += reciprocal_rank_at_k(*it->second, relevant, k);
  }
  result.value = total / static_cast<double>(result.judged_queries);
  return result;
}

void write_metrics(std::ostream& out, const MrrResult& result) {
  nlohmann::ordered_json j;
  j["metric"] = "mrr@" + std::to_string(result.k);
  j["value"] = result.value;
  j["judged_queries"] = result.judged_queries;
  j["missing_queries"] = result.missing_queries;
  out << j.dump(2) << '\n';
}

}  // namespace duet::eval
