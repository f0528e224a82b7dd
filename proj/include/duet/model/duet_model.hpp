#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "duet/model/config.hpp"
#include "duet/model/interaction.hpp"
#include "duet/ndgrad/adam.hpp"
#include "duet/ndgrad/ops.hpp"
#include "duet/textpipe/idf.hpp"
#include "duet/textpipe/sequence.hpp"

namespace duet::model {

using ndgrad::Parameter;
using ndgrad::Tape;
using ndgrad::Tensor;

template <typename T>
struct Dense {
  Tensor<T> weight;  // in × out (conv: filters × channels × width)
  Tensor<T> bias;
};

// Exact count of learnable scalars implied by a configuration.
std::size_t parameter_count(const ModelConfig& config);
std::size_t embedding_parameter_count(const ModelConfig& config);

// The Duet v2 scoring function.
//
// Local sub-model: the IDF-weighted interaction matrix (query_cap ×
// passage_cap) goes through a per-query-term projection of the passage axis
// to `hidden` units, is flattened, and passes through two dense layers.
//
// Distributed sub-model: query and passage embeddings are convolved
// (conv_width, same padding). The query side max-pools over all real
// positions and projects to a vector; the passage side max-pools over
// stride-1 windows of pool_window positions and projects each window. The
// query vector is multiplied elementwise into every window vector and the
// flattened result passes through two dense layers.
//
// Combiner: both hidden-size vectors are concatenated and fed to a
// two-hidden-layer MLP with a scalar output, or (linear ablation) each is
// reduced to a scalar by its own head and the two are mixed linearly.
//
// Dropout follows every activation that feeds a dense layer. Forward
// passes only read parameters, so a model can be shared read-only between
// scoring threads.
template <typename T>
class DuetModel {
 public:
  // Glorot-uniform weights, zero biases, embeddings uniform in ±0.05 with a
  // zero PAD row, all drawn from config.seed.
  explicit DuetModel(ModelConfig config);
  // As above but with the embedding rows taken from `embedding_init`
  // (vocab_size × embed_dim).
  DuetModel(ModelConfig config, std::span<const float> embedding_init);

  // All parameters allocated and zero; loaders fill them in.
  static DuetModel zeroed(ModelConfig config) { return DuetModel(std::move(config), Uninitialized{}); }

  const ModelConfig& config() const { return config_; }

  // Canonical, stable order; names are the checkpoint names.
  std::vector<Parameter<T>> parameters() const;
  std::size_t parameter_count() const;

  Tensor<T> local_forward(Tape<T>& tape, const InteractionMatrix& x, bool training,
                          std::mt19937_64& rng) const;
  Tensor<T> distributed_forward(Tape<T>& tape, const textpipe::TermSequence& query,
                                const textpipe::TermSequence& passage, bool training,
                                std::mt19937_64& rng) const;
  Tensor<T> combine_and_score(Tape<T>& tape, const Tensor<T>& local, const Tensor<T>& distributed,
                              bool training, std::mt19937_64& rng) const;

  // Full M(q, p) as a 1×1 tensor on the tape.
  Tensor<T> forward(Tape<T>& tape, const textpipe::TermSequence& query,
                    const textpipe::TermSequence& passage, const textpipe::IdfTable& idf,
                    bool training, std::mt19937_64& rng) const;

  // Inference-mode score; deterministic, records nothing.
  T score(const textpipe::TermSequence& query, const textpipe::TermSequence& passage,
          const textpipe::IdfTable& idf) const;

  // Deep copy in another precision.
  template <typename U>
  DuetModel<U> cast() const;

 private:
  template <typename U>
  friend class DuetModel;

  struct Uninitialized {};
  DuetModel(ModelConfig config, Uninitialized);
  void allocate();
  void initialize(std::span<const float> embedding_init);
  Tensor<T> activate(Tape<T>& tape, const Tensor<T>& x) const;
  Tensor<T> hidden(Tape<T>& tape, const Tensor<T>& x, const Dense<T>& layer, bool training,
                   std::mt19937_64& rng) const;

  ModelConfig config_;
  Tensor<T> embedding_;
  Tensor<T> passage_embedding_;  // only when embeddings are not shared
  Dense<T> local_proj_, local_fc1_, local_fc2_;
  Dense<T> query_conv_, query_fc_, passage_conv_, passage_fc_, dist_fc1_, dist_fc2_;
  Dense<T> comb_fc1_, comb_fc2_, comb_out_;
  Dense<T> local_head_, dist_head_, mix_;
};

extern template class DuetModel<float>;
extern template class DuetModel<double>;

}  // namespace duet::model
