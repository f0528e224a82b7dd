#include "duet/model/interaction.hpp"

namespace duet::model {

InteractionMatrix build_interaction_matrix(const textpipe::TermSequence& query,
                                           const textpipe::TermSequence& passage,
                                           const textpipe::IdfTable& idf, bool idf_weighting) {
  InteractionMatrix x{query.capacity(), passage.capacity(), {}};
  x.values.assign(x.rows * x.cols, 0.0);
  for (std::size_t i = 0; i < query.length(); ++i) {
    const auto& term = query.tokens[i];
    const double weight = idf_weighting ? idf.idf(term) : 1.0;
    for (std::size_t j = 0; j < passage.length(); ++j)
      if (passage.tokens[j] == term) x.values[i * x.cols + j] = weight;
  }
  return x;
}

}  // namespace duet::model
