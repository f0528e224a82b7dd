#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "duet/textpipe/vocabulary.hpp"

namespace duet::textpipe {

inline constexpr std::size_t kQueryCapacity = 20;
inline constexpr std::size_t kPassageCapacity = 200;

// A query or passage trimmed to a fixed capacity. `tokens` keeps the
// original strings of the first `length()` positions (exact matching works
// on these); `ids` is always `capacity` long with PAD after the true length.
struct TermSequence {
  std::vector<std::string> tokens;
  std::vector<std::int32_t> ids;

  std::size_t length() const { return tokens.size(); }
  std::size_t capacity() const { return ids.size(); }
};

TermSequence encode(std::string_view text, std::size_t capacity, const Vocabulary& vocab);
TermSequence encode_tokens(const std::vector<std::string>& tokens, std::size_t capacity,
                           const Vocabulary& vocab);

}  // namespace duet::textpipe
