#pragma once

#include <vector>

#include "duet/textpipe/idf.hpp"
#include "duet/textpipe/sequence.hpp"

namespace duet::model {

// query_cap × passage_cap exact-match matrix. Entry (i, j) is IDF(q_i)
// when the i-th query token equals the j-th passage token as strings (or
// 1 with weighting off) and 0 otherwise. Padding never matches.
struct InteractionMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

InteractionMatrix build_interaction_matrix(const textpipe::TermSequence& query,
                                           const textpipe::TermSequence& passage,
                                           const textpipe::IdfTable& idf, bool idf_weighting);

}  // namespace duet::model
