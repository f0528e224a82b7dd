#pragma once

#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "duet/model/duet_model.hpp"
#include "duet/textpipe/idf.hpp"
#include "duet/textpipe/vocabulary.hpp"
#include "duet/train/loss.hpp"
#include "duet/train/triples.hpp"

namespace duet::train {

struct TrainConfig {
  double sigma = kDefaultSigma;
  double lr = 1e-3;
  std::size_t batch_size = 1024;
  std::size_t minibatches = 1024;
  // Start the stream over when it runs dry instead of stopping early.
  bool recycle = false;

  void validate() const;  // throws ParameterError
};

struct EncodedTriple {
  textpipe::TermSequence query, positive, negative;
};

// Tokenizes and encodes a raw triple; nullopt when any field has no tokens.
std::optional<EncodedTriple> encode_triple(const Triple& t, const model::ModelConfig& config,
                                           const textpipe::Vocabulary& vocab);

// Mean RankNet loss over the batch in training mode, drawing dropout masks
// from `rng` in batch order. With `accumulate` the gradient of the mean is
// added into the parameters' grad buffers. Throws NumericError on a
// non-finite loss.
template <typename T>
double minibatch_loss(const model::DuetModel<T>& model, std::span<const EncodedTriple> batch,
                      const textpipe::IdfTable& idf, double sigma, std::mt19937_64& rng, bool accumulate);

struct BatchRecord {
  std::size_t step = 0;  // 1-based
  std::size_t size = 0;
  double loss = 0.0;
  double elapsed_ms = 0.0;
};

struct TrainReport {
  std::vector<BatchRecord> batches;
  std::size_t adam_steps = 0;
  std::size_t records_read = 0;
  std::size_t records_used = 0;
  std::size_t skipped = 0;    // empty after tokenization
  std::size_t shortfall = 0;  // requested minus used triples
  double wall_ms = 0.0;
  std::string checkpoint;
  model::ModelConfig model_config;
  TrainConfig train_config;

  double final_loss() const { return batches.empty() ? 0.0 : batches.back().loss; }
};

using ProgressFn = std::function<void(const BatchRecord&)>;

// Runs up to config.minibatches Adam steps over consecutive batches from
// `source`. Deterministic given the model seed and stream order. A short
// final batch is still used; if the stream ends early (and recycle is off)
// training stops and the shortfall is reported.
TrainReport train_model(model::DuetModel<float>& model, TripleSource& source, const textpipe::Vocabulary& vocab,
                        const textpipe::IdfTable& idf, const TrainConfig& config, const ProgressFn& progress = {});

// JSON-lines: one {"step","loss","elapsed_ms","size"} object per batch and
// a final {"summary": {...}} object.
void write_report(std::ostream& out, const TrainReport& report);

}  // namespace duet::train
