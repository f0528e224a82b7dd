#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace duet::model {

enum class Activation { relu, tanh };
enum class Combiner { mlp, linear };

std::string_view to_string(Activation a);
std::string_view to_string(Combiner c);

// Architecture hyperparameters. Defaults reproduce the full model; the
// three ablations flip idf_weighting, activation or combiner.
struct ModelConfig {
  std::size_t query_cap = 20;
  std::size_t passage_cap = 200;
  std::size_t hidden = 300;
  std::size_t embed_dim = 300;
  std::size_t vocab_size = 71486 + 2;
  Activation activation = Activation::relu;
  Combiner combiner = Combiner::mlp;
  bool idf_weighting = true;
  double dropout = 0.5;
  std::size_t conv_width = 3;
  std::size_t pool_window = 100;
  std::uint64_t seed = 0;
  bool share_embeddings = true;
  bool freeze_embeddings = false;

  // Number of stride-1 pooling windows over the passage.
  std::size_t passage_windows() const { return passage_cap - pool_window + 1; }

  // Throws ParameterError naming the first invalid field.
  void validate() const;

  // Ordered key=value pairs; the checkpoint config block and the CLI
  // echo both use this form.
  std::vector<std::pair<std::string, std::string>> to_pairs() const;
  // Sets one field from its string form. Returns false for unknown keys;
  // throws ParameterError for unparsable values.
  bool set(std::string_view key, std::string_view value);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

std::string serialize(const ModelConfig& config);
// Parses the key=value block written by serialize(). Throws FormatError.
ModelConfig parse_model_config(std::string_view text);

}  // namespace duet::model
