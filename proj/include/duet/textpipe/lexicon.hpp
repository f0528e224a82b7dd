#pragma once

#include <filesystem>
#include <iosfwd>

#include "duet/textpipe/idf.hpp"
#include "duet/textpipe/vocabulary.hpp"

namespace duet::textpipe {

// Vocabulary plus IDF statistics, persisted together as one TSV file:
//
//   #N=<passages>
//   #tokens=<total tokens>
//   term<TAB>id<TAB>n_t<TAB>idf
//
// Vocabulary rows come first in id order (reserved rows carry n_t = 0),
// followed by out-of-vocabulary collection terms with id -1 in
// lexicographic order. IDF values are written with 17 significant digits
// so a reload reproduces them exactly.
struct Lexicon {
  Vocabulary vocab;
  IdfTable idf;
};

void write_lexicon(std::ostream& out, const Lexicon& lexicon);
void save_lexicon(const std::filesystem::path& path, const Lexicon& lexicon);

// Throws FormatError naming the line on malformed input, IoError when the
// file cannot be opened.
Lexicon read_lexicon(std::istream& in, const std::string& source = "<stream>");
Lexicon load_lexicon(const std::filesystem::path& path);

}  // namespace duet::textpipe
