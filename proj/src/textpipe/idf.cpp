#include "duet/textpipe/idf.hpp"

#include <cmath>

#include "duet/error.hpp"

namespace duet::textpipe {

double normalized_idf(std::uint64_t passages, std::uint64_t document_frequency) {
  if (passages < 2) throw FormatError("idf: need at least 2 passages, got " + std::to_string(passages));
  if (document_frequency < 1 || document_frequency > passages)
    throw ParameterError("idf: document frequency " + std::to_string(document_frequency) +
                         " outside [1, " + std::to_string(passages) + "]");
  const double n = static_cast<double>(passages);
  return std::log(n / static_cast<double>(document_frequency)) / std::log(n);
}

IdfTable::IdfTable(std::uint64_t passages, std::uint64_t tokens, StringMap<IdfEntry> entries)
    : passages_(passages), tokens_(tokens), entries_(std::move(entries)) {}

double IdfTable::idf(std::string_view term) const {
  auto it = entries_.find(term);
  return it == entries_.end() ? 1.0 : it->second.idf;
}

std::optional<IdfEntry> IdfTable::find(std::string_view term) const {
  auto it = entries_.find(term);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t IdfTable::document_frequency(std::string_view term) const {
  auto it = entries_.find(term);
  return it == entries_.end() ? 0 : it->second.document_frequency;
}

double IdfTable::average_length() const {
  return passages_ == 0 ? 0.0 : static_cast<double>(tokens_) / static_cast<double>(passages_);
}

IdfTable compute_idf(const CollectionCounter& counts) {
  if (counts.passages() < 2)
    throw FormatError("idf: need at least 2 passages, got " + std::to_string(counts.passages()));
  StringMap<IdfEntry> entries;
  entries.reserve(counts.terms().size());
  for (const auto& [term, c] : counts.terms())
    entries.emplace(term, IdfEntry{c.document_frequency, normalized_idf(counts.passages(), c.document_frequency)});
  return IdfTable(counts.passages(), counts.tokens(), std::move(entries));
}

IdfTable compute_idf(std::span<const std::string> passages) {
  CollectionCounter counts;
  for (const auto& p : passages) counts.add_passage(p);
  return compute_idf(counts);
}

}  // namespace duet::textpipe
