#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duet/textpipe/collection.hpp"

namespace duet::textpipe {

// Dense term -> id map. Ids 0 and 1 are reserved for padding and unknown
// terms; content terms follow in descending collection frequency.
class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::string_view kPadToken = "[PAD]";
  static constexpr std::string_view kUnkToken = "[UNK]";
  static constexpr std::size_t kDefaultCap = 71486;

  Vocabulary();
  // Content terms in id order, starting at id 2. Throws FormatError on a
  // duplicate or reserved term.
  explicit Vocabulary(std::vector<std::string> content_terms);

  std::int32_t id(std::string_view term) const;  // kUnk when absent
  std::optional<std::int32_t> find(std::string_view term) const;
  const std::string& term(std::int32_t id) const;
  std::size_t size() const { return terms_.size(); }
  std::span<const std::string> terms() const { return terms_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  std::vector<std::string> terms_;
  StringMap<std::int32_t> index_;
};

// Keeps the `cap` most frequent terms by total occurrence count, ties
// broken lexicographically ascending. Throws ParameterError for cap < 1 and
// FormatError for an empty collection.
Vocabulary build_vocabulary(const CollectionCounter& counts, std::size_t cap = Vocabulary::kDefaultCap);
Vocabulary build_vocabulary(std::span<const std::string> passages,
                            std::size_t cap = Vocabulary::kDefaultCap);

}  // namespace duet::textpipe
