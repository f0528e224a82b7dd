#include "duet/textpipe/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "duet/error.hpp"
#include "duet/textpipe/readers.hpp"

namespace duet::textpipe {
namespace {

std::string format_idf(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Int>
Int parse_int(std::string_view s, const std::string& where) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw FormatError(where + ": expected an integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  out << "#N=" << lexicon.idf.passages() << '\n';
  out << "#tokens=" << lexicon.idf.tokens() << '\n';
  const auto& vocab = lexicon.vocab;
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const auto& term = vocab.terms()[id];
    const auto entry = lexicon.idf.find(term).value_or(IdfEntry{});
    out << term << '\t' << id << '\t' << entry.document_frequency << '\t' << format_idf(entry.idf) << '\n';
  }
  std::vector<const std::string*> rest;
  for (const auto& [term, entry] : lexicon.idf.entries())
    if (!vocab.find(term)) rest.push_back(&term);
  std::sort(rest.begin(), rest.end(), [](const auto* a, const auto* b) { return *a < *b; });
  for (const auto* term : rest) {
    const auto& entry = lexicon.idf.entries().find(*term)->second;
    out << *term << "\t-1\t" << entry.document_frequency << '\t' << format_idf(entry.idf) << '\n';
  }
}

void save_lexicon(const std::filesystem::path& path, const Lexicon& lexicon) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write lexicon file " + path.string());
  write_lexicon(out, lexicon);
  if (!out) throw IoError("failed writing lexicon file " + path.string());
}

Lexicon read_lexicon(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return source + ":" + std::to_string(lineno); };

  std::uint64_t passages = 0, tokens = 0;
  bool have_n = false;
  std::vector<std::string> content;
  StringMap<IdfEntry> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("#N=", 0) == 0) {
      passages = parse_int<std::uint64_t>(std::string_view(line).substr(3), where());
      have_n = true;
      continue;
    }
    if (line.rfind("#tokens=", 0) == 0) {
      tokens = parse_int<std::uint64_t>(std::string_view(line).substr(8), where());
      continue;
    }
    if (line[0] == '#') continue;
    const auto f = split_tabs(line);
    if (f.size() != 4)
      throw FormatError(where() + ": expected 4 tab-separated fields, got " + std::to_string(f.size()));
    const std::string term(f[0]);
    const auto id = parse_int<std::int64_t>(f[1], where());
    const auto df = parse_int<std::uint64_t>(f[2], where());
    char* end = nullptr;
    const std::string idf_text(f[3]);
    const double idf = std::strtod(idf_text.c_str(), &end);
    if (end != idf_text.c_str() + idf_text.size())
      throw FormatError(where() + ": bad idf value '" + idf_text + "'");
    if (id >= 0) {
      const auto expected = static_cast<std::int64_t>(content.size()) + 2;
      if (id < 2) {
        const auto reserved = id == Vocabulary::kPad ? Vocabulary::kPadToken : Vocabulary::kUnkToken;
        if (term != reserved) throw FormatError(where() + ": id " + std::to_string(id) + " is reserved");
        continue;
      }
      if (id != expected)
        throw FormatError(where() + ": vocabulary ids must be dense, expected " + std::to_string(expected));
      content.push_back(term);
    }
    if (df > 0) entries.emplace(term, IdfEntry{df, idf});
  }
  if (!have_n) throw FormatError(source + ": missing #N= header");
  return {Vocabulary(std::move(content)), IdfTable(passages, tokens, std::move(entries))};
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon file " + path.string());
  return read_lexicon(in, path.string());
}

}  // namespace duet::textpipe
