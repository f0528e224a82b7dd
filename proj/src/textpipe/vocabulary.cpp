#include "duet/textpipe/vocabulary.hpp"

#include <algorithm>

#include "duet/error.hpp"

namespace duet::textpipe {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> content_terms) {
  terms_.reserve(content_terms.size() + 2);
  terms_.emplace_back(kPadToken);
  terms_.emplace_back(kUnkToken);
  for (auto& t : content_terms) terms_.push_back(std::move(t));
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<std::int32_t>(i)).second)
      throw FormatError("vocabulary: duplicate term '" + terms_[i] + "'");
  }
}

std::int32_t Vocabulary::id(std::string_view term) const { return find(term).value_or(kUnk); }

std::optional<std::int32_t> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::term(std::int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= terms_.size())
    throw IndexError("vocabulary: id " + std::to_string(id) + " out of range");
  return terms_[static_cast<std::size_t>(id)];
}

Vocabulary build_vocabulary(const CollectionCounter& counts, std::size_t cap) {
  if (cap < 1) throw ParameterError("vocabulary cap must be >= 1");
  if (counts.passages() == 0) throw FormatError("vocabulary: empty collection");
  using Item = std::pair<std::uint64_t, const std::string*>;
  std::vector<Item> items;
  items.reserve(counts.terms().size());
  for (const auto& [term, c] : counts.terms()) items.emplace_back(c.collection_frequency, &term);
  auto before = [](const Item& a, const Item& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  };
  const std::size_t keep = std::min(cap, items.size());
  std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(keep), items.end(), before);
  std::vector<std::string> terms;
  terms.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) terms.push_back(*items[i].second);
  return Vocabulary(std::move(terms));
}

Vocabulary build_vocabulary(std::span<const std::string> passages, std::size_t cap) {
  CollectionCounter counts;
  for (const auto& p : passages) counts.add_passage(p);
  return build_vocabulary(counts, cap);
}

}  // namespace duet::textpipe
