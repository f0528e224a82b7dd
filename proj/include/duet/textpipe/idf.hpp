#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "duet/textpipe/collection.hpp"

namespace duet::textpipe {

// log(N / n_t) / log(N), the Robertson-Walker IDF scaled into [0, 1].
double normalized_idf(std::uint64_t passages, std::uint64_t document_frequency);

struct IdfEntry {
  std::uint64_t document_frequency = 0;
  double idf = 0.0;
};

// Per-term IDF over every term seen in the collection, not only
// vocabulary terms.
class IdfTable {
 public:
  IdfTable() = default;
  IdfTable(std::uint64_t passages, std::uint64_t tokens, StringMap<IdfEntry> entries);

  // 1.0 for a term never seen in the collection.
  double idf(std::string_view term) const;
  std::optional<IdfEntry> find(std::string_view term) const;
  std::uint64_t document_frequency(std::string_view term) const;

  std::uint64_t passages() const { return passages_; }
  std::uint64_t tokens() const { return tokens_; }
  double average_length() const;
  const StringMap<IdfEntry>& entries() const { return entries_; }

  friend bool operator==(const IdfTable& a, const IdfTable& b) {
    return a.passages_ == b.passages_ && a.tokens_ == b.tokens_ && a.entries_.size() == b.entries_.size() &&
           std::all_of(a.entries_.begin(), a.entries_.end(), [&](const auto& kv) {
             auto it = b.entries_.find(kv.first);
             return it != b.entries_.end() && it->second.document_frequency == kv.second.document_frequency &&
                    it->second.idf == kv.second.idf;
           });
  }

 private:
  std::uint64_t passages_ = 0;
  std::uint64_t tokens_ = 0;
  StringMap<IdfEntry> entries_;
};

// Throws FormatError when the collection has fewer than two passages.
IdfTable compute_idf(const CollectionCounter& counts);
IdfTable compute_idf(std::span<const std::string> passages);

}  // namespace duet::textpipe
