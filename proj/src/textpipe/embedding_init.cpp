#include "duet/textpipe/embedding_init.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <random>
#include <string>

#include "duet/error.hpp"

namespace duet::textpipe {

EmbeddingInit random_embedding_init(const Vocabulary& vocab, std::size_t dim, std::uint64_t seed) {
  return random_embedding_init(vocab.size(), dim, seed);
}

EmbeddingInit random_embedding_init(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw ParameterError("embedding dimension must be >= 1");
  EmbeddingInit init;
  init.dim = dim;
  init.table.resize(rows * dim);
  std::mt19937_64 rng(seed);
  for (auto& v : init.table) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = static_cast<float>((2.0 * u - 1.0) * kEmbeddingInitRange);
  }
  std::fill_n(init.table.begin(), dim, 0.0f);
  return init;
}

EmbeddingInit load_embedding_init(std::istream& in, const Vocabulary& vocab, std::size_t dim,
                                  std::uint64_t seed, const std::string& source) {
  auto init = random_embedding_init(vocab, dim, seed);
  std::vector<bool> seen(vocab.size(), false);
  std::string line;
  std::size_t lineno = 0;
  std::vector<float> row;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos)
      throw FormatError(source + ":" + std::to_string(lineno) + ": expected a token followed by " +
                        std::to_string(dim) + " values");
    row.clear();
    const char* p = line.data() + space;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc())
        throw FormatError(source + ":" + std::to_string(lineno) + ": bad float near column " +
                          std::to_string(p - line.data() + 1));
      row.push_back(v);
      p = next;
    }
    if (row.size() != dim)
      throw FormatError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                        " values, got " + std::to_string(row.size()));
    const auto id = vocab.find(std::string_view(line).substr(0, space));
    if (!id || *id == Vocabulary::kPad || *id == Vocabulary::kUnk) continue;
    const auto r = static_cast<std::size_t>(*id);
    if (seen[r]) continue;
    seen[r] = true;
    ++init.covered;
    std::copy(row.begin(), row.end(), init.table.begin() + static_cast<std::ptrdiff_t>(r * dim));
  }
  return init;
}

EmbeddingInit load_embedding_init(const std::filesystem::path& path, const Vocabulary& vocab,
                                  std::size_t dim, std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding file " + path.string());
  return load_embedding_init(in, vocab, dim, seed, path.string());
}

}  // namespace duet::textpipe
