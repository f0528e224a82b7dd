#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "duet/textpipe/readers.hpp"

namespace duet::testing {

inline std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// Separable triples over a `lexicon`-word language: every positive shares
// at least one term with its query, no negative shares any.
inline std::vector<textpipe::Triple> separable_triples(std::size_t n, std::uint64_t seed,
                                                       std::size_t lexicon = 40) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> words(lexicon);
  for (std::size_t i = 0; i < lexicon; ++i) words[i] = "w" + std::to_string(i);
  std::vector<textpipe::Triple> out;
  for (std::size_t k = 0; k < n; ++k) {
    auto pool = words;
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::vector<std::string> query(pool.begin(), pool.begin() + 3);
    const std::vector<std::string> rest(pool.begin() + 3, pool.end());
    std::uniform_int_distribution<std::size_t> pick(0, rest.size() - 1);
    std::vector<std::string> pos, neg;
    for (int i = 0; i < 6; ++i) {
      pos.push_back(rest[pick(rng)]);
      neg.push_back(rest[pick(rng)]);
    }
    pos[rng() % pos.size()] = query[rng() % query.size()];
    out.push_back({join(query), join(pos), join(neg)});
  }
  return out;
}

// The passages side of a triple set, for building vocabulary and IDF.
inline std::vector<std::string> passages_of(const std::vector<textpipe::Triple>& triples) {
  std::vector<std::string> out;
  for (const auto& t : triples) {
    out.push_back(t.positive);
    out.push_back(t.negative);
  }
  return out;
}

}  // namespace duet::testing
