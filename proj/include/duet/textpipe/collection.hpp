#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace duet::textpipe {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

struct TermCounts {
  std::uint64_t collection_frequency = 0;  // total occurrences
  std::uint64_t document_frequency = 0;    // passages containing the term
};

// Accumulates collection statistics over a passage stream. Shards can be
// counted independently and merged; merging is plain addition, so the
// result does not depend on shard order.
class CollectionCounter {
 public:
  void add_passage(std::string_view text);
  void add_tokens(const std::vector<std::string>& tokens);
  void merge(const CollectionCounter& other);

  std::uint64_t passages() const { return passages_; }
  std::uint64_t tokens() const { return tokens_; }
  const StringMap<TermCounts>& terms() const { return terms_; }

 private:
  std::uint64_t passages_ = 0;
  std::uint64_t tokens_ = 0;
  StringMap<TermCounts> terms_;
};

}  // namespace duet::textpipe
