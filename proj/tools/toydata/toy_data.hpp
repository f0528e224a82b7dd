#pragma once

#include <cstdint>
#include <filesystem>

namespace toydata {

struct ToyOptions {
  std::size_t train_triples = 256;
  std::size_t dev_queries = 20;
  std::size_t candidates_per_query = 12;
  std::size_t lexicon = 80;
  std::uint64_t seed = 1;
};

struct ToyFiles {
  std::filesystem::path collection;  // pid<TAB>passage
  std::filesystem::path triples;     // query<TAB>positive<TAB>negative
  std::filesystem::path candidates;  // qid<TAB>pid<TAB>query<TAB>passage
  std::filesystem::path qrels;       // qid 0 pid 1
};

// A synthetic retrieval world: each relevant passage repeats one or two of
// its query's terms among filler words, non-relevant passages share none.
// Output is a pure function of the options.
ToyFiles write_toy_data(const std::filesystem::path& dir, const ToyOptions& options = {});

}  // namespace toydata
