#include "duet/train/triples.hpp"

#include <algorithm>

#include "duet/error.hpp"

namespace duet::train {

std::optional<Triple> VectorSource::next() {
  if (pos_ >= triples_.size()) return std::nullopt;
  return triples_[pos_++];
}

FileSource::FileSource(std::filesystem::path path) : path_(std::move(path)) { rewind(); }

void FileSource::rewind() { reader_ = std::make_unique<textpipe::TripleReader>(path_); }

BlockShuffleSource::BlockShuffleSource(std::unique_ptr<TripleSource> inner, std::uint64_t seed,
                                       std::size_t buffer)
    : inner_(std::move(inner)), rng_(seed), capacity_(buffer) {
  if (capacity_ == 0) throw ParameterError("shuffle buffer must hold at least one record");
}

void BlockShuffleSource::refill() {
  block_.clear();
  pos_ = 0;
  while (block_.size() < capacity_) {
    auto t = inner_->next();
    if (!t) break;
    block_.push_back(std::move(*t));
  }
  // Fisher-Yates with the raw engine keeps the order identical across
  // standard library implementations.
  for (std::size_t i = block_.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng_() % i);
    std::swap(block_[i - 1], block_[j]);
  }
}

std::optional<Triple> BlockShuffleSource::next() {
  if (pos_ >= block_.size()) {
    refill();
    if (block_.empty()) return std::nullopt;
  }
  return std::move(block_[pos_++]);
}

void BlockShuffleSource::rewind() {
  inner_->rewind();
  block_.clear();
  pos_ = 0;
}

BootstrapSource::BootstrapSource(std::unique_ptr<TripleSource> inner, std::uint64_t seed)
    : inner_(std::move(inner)), rng_(seed) {}

std::optional<Triple> BootstrapSource::next() {
  while (remaining_ == 0) {
    current_ = inner_->next();
    if (!current_) return std::nullopt;
    remaining_ = copies_(rng_);
  }
  --remaining_;
  return *current_;
}

void BootstrapSource::rewind() {
  inner_->rewind();
  current_.reset();
  remaining_ = 0;
}

}  // namespace duet::train
