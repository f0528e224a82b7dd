#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "duet/textpipe/readers.hpp"

namespace duet::train {

using textpipe::Triple;

// A restartable stream of training triples.
class TripleSource {
 public:
  virtual ~TripleSource() = default;
  virtual std::optional<Triple> next() = 0;
  // Starts the stream over. Shuffled views draw a fresh order.
  virtual void rewind() = 0;
};

class VectorSource final : public TripleSource {
 public:
  explicit VectorSource(std::vector<Triple> triples) : triples_(std::move(triples)) {}
  std::optional<Triple> next() override;
  void rewind() override { pos_ = 0; }

 private:
  std::vector<Triple> triples_;
  std::size_t pos_ = 0;
};

class FileSource final : public TripleSource {
 public:
  // Throws IoError when the file cannot be opened.
  explicit FileSource(std::filesystem::path path);
  std::optional<Triple> next() override { return reader_->next(); }
  void rewind() override;

 private:
  std::filesystem::path path_;
  std::unique_ptr<textpipe::TripleReader> reader_;
};

inline constexpr std::size_t kShuffleBuffer = std::size_t{1} << 16;

// Reads `buffer` records at a time from the inner stream and emits each
// block in a seeded random order.
class BlockShuffleSource final : public TripleSource {
 public:
  BlockShuffleSource(std::unique_ptr<TripleSource> inner, std::uint64_t seed,
                     std::size_t buffer = kShuffleBuffer);
  std::optional<Triple> next() override;
  void rewind() override;

 private:
  void refill();

  std::unique_ptr<TripleSource> inner_;
  std::mt19937_64 rng_;
  std::size_t capacity_;
  std::vector<Triple> block_;
  std::size_t pos_ = 0;
};

// Streaming bootstrap: each record is repeated Poisson(1) times, which
// approximates sampling with replacement without random access.
class BootstrapSource final : public TripleSource {
 public:
  BootstrapSource(std::unique_ptr<TripleSource> inner, std::uint64_t seed);
  std::optional<Triple> next() override;
  void rewind() override;

 private:
  std::unique_ptr<TripleSource> inner_;
  std::mt19937_64 rng_;
  std::poisson_distribution<int> copies_{1.0};
  std::optional<Triple> current_;
  int remaining_ = 0;
};

}  // namespace duet::train
