#pragma once

// Streaming readers for the dataset files. Records are produced one line at
// a time; malformed lines throw FormatError naming file and line.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace duet::textpipe {

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  LineReader(std::unique_ptr<std::istream> in, std::string source);

  // Next line without its terminator (CR stripped). Blank lines are skipped.
  bool next(std::string& line);
  std::size_t line_number() const { return line_number_; }
  const std::string& source() const { return source_; }
  std::string where() const { return source_ + ":" + std::to_string(line_number_); }

 private:
  std::unique_ptr<std::istream> in_;
  std::string source_;
  std::size_t line_number_ = 0;
};

std::vector<std::string_view> split_tabs(std::string_view line);

struct Triple {
  std::string query;
  std::string positive;
  std::string negative;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct CandidateRecord {
  std::int64_t query_id = 0;
  std::int64_t passage_id = 0;
  std::string query;
  std::string passage;
};

struct QrelRecord {
  std::int64_t query_id = 0;
  std::int64_t passage_id = 0;
  int relevance = 0;
  bool relevant() const { return relevance > 0; }
};

// query<TAB>positive<TAB>negative
class TripleReader {
 public:
  explicit TripleReader(const std::filesystem::path& path) : lines_(path) {}
  explicit TripleReader(LineReader lines) : lines_(std::move(lines)) {}
  std::optional<Triple> next();
  std::size_t line_number() const { return lines_.line_number(); }

 private:
  LineReader lines_;
  std::string buf_;
};

// qid<TAB>pid<TAB>query<TAB>passage
class CandidateReader {
 public:
  explicit CandidateReader(const std::filesystem::path& path) : lines_(path) {}
  explicit CandidateReader(LineReader lines) : lines_(std::move(lines)) {}
  std::optional<CandidateRecord> next();

 private:
  LineReader lines_;
  std::string buf_;
};

// qid 0 pid relevance (whitespace separated)
class QrelsReader {
 public:
  explicit QrelsReader(const std::filesystem::path& path) : lines_(path) {}
  explicit QrelsReader(LineReader lines) : lines_(std::move(lines)) {}
  std::optional<QrelRecord> next();

 private:
  LineReader lines_;
  std::string buf_;
};

// Passage collection: one passage per line, optionally prefixed by an
// integer id and a TAB (the MS MARCO collection.tsv layout).
class CollectionReader {
 public:
  explicit CollectionReader(const std::filesystem::path& path) : lines_(path) {}
  explicit CollectionReader(LineReader lines) : lines_(std::move(lines)) {}
  std::optional<std::string> next();

 private:
  LineReader lines_;
  std::string buf_;
};

std::string format_triple(const Triple& t);

}  // namespace duet::textpipe
