#include "duet/textpipe/sequence.hpp"

#include <algorithm>

#include "duet/textpipe/tokenizer.hpp"

namespace duet::textpipe {

TermSequence encode_tokens(const std::vector<std::string>& tokens, std::size_t capacity,
                           const Vocabulary& vocab) {
  TermSequence seq;
  const std::size_t n = std::min(capacity, tokens.size());
  seq.tokens.assign(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(n));
  seq.ids.assign(capacity, Vocabulary::kPad);
  for (std::size_t i = 0; i < n; ++i) seq.ids[i] = vocab.id(seq.tokens[i]);
  return seq;
}

TermSequence encode(std::string_view text, std::size_t capacity, const Vocabulary& vocab) {
  return encode_tokens(tokenize(text), capacity, vocab);
}

}  // namespace duet::textpipe
