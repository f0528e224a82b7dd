#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "duet/textpipe/vocabulary.hpp"

namespace duet::textpipe {

// Initial embedding table, vocab.size() × dim, row-major.
struct EmbeddingInit {
  std::size_t dim = 0;
  std::vector<float> table;
  std::size_t covered = 0;  // vocabulary rows copied from the pretrained file
};

inline constexpr float kEmbeddingInitRange = 0.05f;

// Every row uniform in [-0.05, 0.05] from `seed`, PAD row zero.
EmbeddingInit random_embedding_init(std::size_t rows, std::size_t dim, std::uint64_t seed);
EmbeddingInit random_embedding_init(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed);

// Pretrained text vectors (token followed by `dim` floats per line). Rows
// for vocabulary terms found in the file are copied exactly; the first
// occurrence of a token wins. All other rows follow random_embedding_init.
// Throws FormatError with the line number on a dimension mismatch.
EmbeddingInit load_embedding_init(std::istream& in, const Vocabulary& vocab, std::size_t dim,
                                  std::uint64_t seed, const std::string& source = "<stream>");
EmbeddingInit load_embedding_init(const std::filesystem::path& path, const Vocabulary& vocab,
                                  std::size_t dim, std::uint64_t seed);

}  // namespace duet::textpipe
