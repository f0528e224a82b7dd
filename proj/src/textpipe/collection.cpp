#include "duet/textpipe/collection.hpp"

#include <algorithm>

#include "duet/textpipe/tokenizer.hpp"

namespace duet::textpipe {

void CollectionCounter::add_passage(std::string_view text) { add_tokens(tokenize(text)); }

void CollectionCounter::add_tokens(const std::vector<std::string>& tokens) {
  ++passages_;
  tokens_ += tokens.size();
  std::vector<std::string_view> distinct(tokens.begin(), tokens.end());
  std::sort(distinct.begin(), distinct.end());
  for (std::size_t i = 0; i < distinct.size();) {
    std::size_t j = i;
    while (j < distinct.size() && distinct[j] == distinct[i]) ++j;
    auto it = terms_.find(distinct[i]);
    if (it == terms_.end()) it = terms_.emplace(std::string(distinct[i]), TermCounts{}).first;
    it->second.collection_frequency += j - i;
    it->second.document_frequency += 1;
    i = j;
  }
}

void CollectionCounter::merge(const CollectionCounter& other) {
  passages_ += other.passages_;
  tokens_ += other.tokens_;
  for (const auto& [term, c] : other.terms_) {
    auto& mine = terms_[term];
    mine.collection_frequency += c.collection_frequency;
    mine.document_frequency += c.document_frequency;
  }
}

}  // namespace duet::textpipe
