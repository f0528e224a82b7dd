#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace duet::textpipe {

// Lowercases and splits on every maximal run of non-alphanumeric code
// points. Input is UTF-8; Unicode letters and digits count as
// alphanumeric. Malformed byte sequences act as separators.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace duet::textpipe
