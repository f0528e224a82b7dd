#include "toy_data.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "duet/error.hpp"

namespace toydata {
namespace {

class World {
 public:
  World(std::size_t lexicon, std::uint64_t seed) : rng_(seed) {
    for (std::size_t i = 0; i < lexicon; ++i) words_.push_back("t" + std::to_string(i));
  }

  std::vector<std::string> query() {
    auto pool = words_;
    partial_shuffle(pool, 3);
    return {pool.begin(), pool.begin() + 2 + static_cast<long>(below(2))};
  }

  std::string relevant(const std::vector<std::string>& q) {
    auto words = filler(q, 5 + below(6));
    const std::size_t hits = 1 + below(2);
    for (std::size_t h = 0; h < hits; ++h) words[below(words.size())] = q[below(q.size())];
    return join(words);
  }

  std::string irrelevant(const std::vector<std::string>& q) { return join(filler(q, 5 + below(6))); }

  static std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
    return out;
  }

 private:
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  void partial_shuffle(std::vector<std::string>& v, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) std::swap(v[i], v[i + below(v.size() - i)]);
  }

  std::vector<std::string> filler(const std::vector<std::string>& avoid, std::size_t n) {
    std::vector<std::string> out;
    while (out.size() < n) {
      const auto& w = words_[below(words_.size())];
      if (std::find(avoid.begin(), avoid.end(), w) == avoid.end()) out.push_back(w);
    }
    return out;
  }

  std::mt19937_64 rng_;
  std::vector<std::string> words_;
};

std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw duet::IoError("cannot write " + p.string());
  return out;
}

}  // namespace

ToyFiles write_toy_data(const std::filesystem::path& dir, const ToyOptions& options) {
  std::filesystem::create_directories(dir);
  ToyFiles files{dir / "collection.tsv", dir / "triples.tsv", dir / "candidates.tsv", dir / "qrels.tsv"};
  World world(options.lexicon, options.seed);

  auto triples = open(files.triples);
  for (std::size_t i = 0; i < options.train_triples; ++i) {
    const auto q = world.query();
    triples << World::join(q) << '\t' << world.relevant(q) << '\t' << world.irrelevant(q) << '\n';
  }

  auto collection = open(files.collection);
  auto candidates = open(files.candidates);
  auto qrels = open(files.qrels);
  for (std::size_t qi = 0; qi < options.dev_queries; ++qi) {
    const auto q = world.query();
    const auto qid = 1000 + qi;
    const auto hit = qi % options.candidates_per_query;
    for (std::size_t j = 0; j < options.candidates_per_query; ++j) {
      const auto pid = qid * 100 + j;
      const auto text = j == hit ? world.relevant(q) : world.irrelevant(q);
      collection << pid << '\t' << text << '\n';
      candidates << qid << '\t' << pid << '\t' << World::join(q) << '\t' << text << '\n';
      if (j == hit) qrels << qid << " 0 " << pid << " 1\n";
    }
  }
  return files;
}

}  // namespace toydata
