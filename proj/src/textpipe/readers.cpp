#include "duet/textpipe/readers.hpp"

#include <charconv>
#include <sstream>

#include "duet/error.hpp"

namespace duet::textpipe {
namespace {

template <typename Int>
Int parse_int(std::string_view s, const LineReader& lines, const char* what) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw FormatError(lines.where() + ": " + what + " must be an integer, got '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

LineReader::LineReader(const std::filesystem::path& path) : source_(path.string()) {
  auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*file) throw IoError("cannot open " + path.string());
  in_ = std::move(file);
}

LineReader::LineReader(std::unique_ptr<std::istream> in, std::string source)
    : in_(std::move(in)), source_(std::move(source)) {}

bool LineReader::next(std::string& line) {
  while (std::getline(*in_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return true;
  }
  if (in_->bad()) throw IoError("read error in " + source_);
  return false;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::optional<Triple> TripleReader::next() {
  if (!lines_.next(buf_)) return std::nullopt;
  const auto f = split_tabs(buf_);
  if (f.size() != 3)
    throw FormatError(lines_.where() + ": triples need 3 tab-separated fields, got " + std::to_string(f.size()));
  return Triple{std::string(f[0]), std::string(f[1]), std::string(f[2])};
}

std::optional<CandidateRecord> CandidateReader::next() {
  if (!lines_.next(buf_)) return std::nullopt;
  const auto f = split_tabs(buf_);
  if (f.size() != 4)
    throw FormatError(lines_.where() + ": candidates need 4 tab-separated fields, got " +
                      std::to_string(f.size()));
  return CandidateRecord{parse_int<std::int64_t>(f[0], lines_, "query id"),
                         parse_int<std::int64_t>(f[1], lines_, "passage id"), std::string(f[2]),
                         std::string(f[3])};
}

std::optional<QrelRecord> QrelsReader::next() {
  if (!lines_.next(buf_)) return std::nullopt;
  const auto f = split_whitespace(buf_);
  if (f.size() != 4)
    throw FormatError(lines_.where() + ": qrels need 4 whitespace-separated fields, got " +
                      std::to_string(f.size()));
  if (f[1] != "0") throw FormatError(lines_.where() + ": second qrels field must be the literal 0");
  return QrelRecord{parse_int<std::int64_t>(f[0], lines_, "query id"),
                    parse_int<std::int64_t>(f[2], lines_, "passage id"),
                    parse_int<int>(f[3], lines_, "relevance")};
}

std::optional<std::string> CollectionReader::next() {
  if (!lines_.next(buf_)) return std::nullopt;
  const auto tab = buf_.find('\t');
  if (tab != std::string::npos && tab > 0) {
    std::int64_t id = 0;
    auto [p, ec] = std::from_chars(buf_.data(), buf_.data() + tab, id);
    if (ec == std::errc() && p == buf_.data() + tab) return buf_.substr(tab + 1);
  }
  return buf_;
}

std::string format_triple(const Triple& t) { return t.query + '\t' + t.positive + '\t' + t.negative; }

}  // namespace duet::textpipe
