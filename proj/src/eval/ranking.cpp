#include "duet/eval/ranking.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "duet/error.hpp"
#include "duet/textpipe/tokenizer.hpp"

namespace duet::eval {

std::vector<CandidateSet> group_candidates(textpipe::CandidateReader& reader) {
  std::vector<CandidateSet> out;
  std::unordered_map<std::int64_t, std::size_t> slot;
  std::unordered_map<std::int64_t, std::unordered_set<std::int64_t>> seen;
  while (auto rec = reader.next()) {
    auto [it, fresh] = slot.try_emplace(rec->query_id, out.size());
    if (fresh) out.push_back({rec->query_id, std::move(rec->query), {}});
    if (!seen[rec->query_id].insert(rec->passage_id).second)
      throw ContractError("candidates: passage " + std::to_string(rec->passage_id) + " repeated for query " +
                          std::to_string(rec->query_id));
    out[it->second].passages.push_back({rec->passage_id, std::move(rec->passage)});
  }
  return out;
}

std::vector<CandidateSet> load_candidates(const std::filesystem::path& path) {
  textpipe::CandidateReader reader(path);
  return group_candidates(reader);
}

RankedList sort_ranked(std::int64_t query_id, std::vector<ScoredPassage> scores) {
  std::sort(scores.begin(), scores.end(), [](const ScoredPassage& a, const ScoredPassage& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.passage_id < b.passage_id;
  });
  return {query_id, std::move(scores)};
}

std::vector<ScoredPassage> ensemble_scores(std::span<const std::vector<ScoredPassage>> per_model) {
  if (per_model.empty()) throw ContractError("ensemble_scores: no models");
  const auto& first = per_model.front();
  std::unordered_map<std::int64_t, std::size_t> index;
  for (std::size_t i = 0; i < first.size(); ++i) index.emplace(first[i].passage_id, i);
  if (index.size() != first.size()) throw ContractError("ensemble_scores: repeated passage id");

  std::vector<double> sums(first.size(), 0.0);
  for (std::size_t m = 0; m < per_model.size(); ++m) {
    const auto& list = per_model[m];
    if (list.size() != first.size())
      throw ContractError("ensemble_scores: model " + std::to_string(m) + " scored " + std::to_string(list.size()) +
                          " passages, model 0 scored " + std::to_string(first.size()));
    std::vector<bool> hit(first.size(), false);
    for (const auto& s : list) {
      auto it = index.find(s.passage_id);
      if (it == index.end() || hit[it->second])
        throw ContractError("ensemble_scores: model " + std::to_string(m) + " has a different candidate set (passage " +
                            std::to_string(s.passage_id) + ")");
      hit[it->second] = true;
      sums[it->second] += s.score;
    }
  }
  std::vector<ScoredPassage> fused(first.size());
  const double n = static_cast<double>(per_model.size());
  for (std::size_t i = 0; i < first.size(); ++i) fused[i] = {first[i].passage_id, sums[i] / n};
  return fused;
}

RankedList rank_candidates(std::span<const model::DuetModel<float>* const> models, const CandidateSet& candidates,
                           const textpipe::Vocabulary& vocab, const textpipe::IdfTable& idf) {
  if (models.empty()) throw ParameterError("rank_candidates: no models");
  const auto q_tokens = textpipe::tokenize(candidates.query);
  std::vector<std::vector<ScoredPassage>> per_model;
  for (const auto* m : models) {
    const auto& c = m->config();
    const auto q = textpipe::encode_tokens(q_tokens, c.query_cap, vocab);
    std::vector<ScoredPassage> scores;
    scores.reserve(candidates.passages.size());
    for (const auto& p : candidates.passages) {
      const auto d = textpipe::encode(p.text, c.passage_cap, vocab);
      scores.push_back({p.passage_id, static_cast<double>(m->score(q, d, idf))});
    }
    per_model.push_back(std::move(scores));
  }
  auto fused = per_model.size() == 1 ? std::move(per_model.front())
                                     : ensemble_scores(std::span<const std::vector<ScoredPassage>>(per_model));
  return sort_ranked(candidates.query_id, std::move(fused));
}

Run rank_all(std::span<const model::DuetModel<float>* const> models, std::span<const CandidateSet> queries,
             const textpipe::Vocabulary& vocab, const textpipe::IdfTable& idf, std::size_t jobs) {
  Run run(queries.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < queries.size();) {
      try {
        run[i] = rank_candidates(models, queries[i], vocab, idf);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = queries.size();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(queries.size(), 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return run;
}

}  // namespace duet::eval
