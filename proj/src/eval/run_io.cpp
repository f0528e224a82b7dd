#include "duet/eval/run_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "duet/error.hpp"

namespace duet::eval {
namespace {

std::vector<std::string_view> fields_of(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename Num>
Num parse_field(std::string_view f, const std::string& where, const char* what) {
  Num v{};
  auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || p != f.data() + f.size())
    throw FormatError(where + ": bad " + what + " '" + std::string(f) + "'");
  return v;
}

}  // namespace

std::string_view to_string(RunFormat f) { return f == RunFormat::trec ? "trec" : "marco"; }

RunFormat parse_run_format(std::string_view text) {
  if (text == "trec") return RunFormat::trec;
  if (text == "marco") return RunFormat::marco;
  throw ParameterError("run format must be 'trec' or 'marco', got '" + std::string(text) + "'");
}

void write_run(std::ostream& out, const Run& run, RunFormat format, std::string_view run_name) {
  char score[64];
  for (const auto& list : run) {
    const auto qid = std::to_string(list.query_id);
    for (std::size_t r = 0; r < list.entries.size(); ++r) {
      const auto& e = list.entries[r];
      if (format == RunFormat::trec) {
        std::snprintf(score, sizeof score, "%.6f", e.score);
        out << qid << " Q0 " << e.passage_id << ' ' << (r + 1) << ' ' << score << ' ' << run_name << '\n';
      } else {
        out << qid << '\t' << e.passage_id << '\t' << (r + 1) << '\n';
      }
    }
  }
}

void save_run(const std::filesystem::path& path, const Run& run, RunFormat format, std::string_view run_name) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write run file " + path.string());
  write_run(out, run, format, run_name);
  out.flush();
  if (!out) throw IoError("error while writing run file " + path.string());
}

Run read_run(std::istream& in, const std::string& source) {
  struct Row {
    std::size_t rank;
    ScoredPassage entry;
  };
  std::vector<std::pair<std::int64_t, std::vector<Row>>> groups;
  std::unordered_map<std::int64_t, std::size_t> slot;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto f = fields_of(line);
    if (f.empty()) continue;
    const std::string where = source + ":" + std::to_string(n);
    std::int64_t qid = 0;
    Row row{};
    if (f.size() == 6) {
      qid = parse_field<std::int64_t>(f[0], where, "query id");
      row.entry.passage_id = parse_field<std::int64_t>(f[2], where, "passage id");
      row.rank = parse_field<std::size_t>(f[3], where, "rank");
      row.entry.score = parse_field<double>(f[4], where, "score");
    } else if (f.size() == 3) {
      qid = parse_field<std::int64_t>(f[0], where, "query id");
      row.entry.passage_id = parse_field<std::int64_t>(f[1], where, "passage id");
      row.rank = parse_field<std::size_t>(f[2], where, "rank");
      row.entry.score = -static_cast<double>(row.rank);
    } else {
      throw FormatError(where + ": run lines need 6 (trec) or 3 (marco) fields, got " + std::to_string(f.size()));
    }
    if (row.rank < 1) throw FormatError(where + ": ranks start at 1");
    auto [it, fresh] = slot.try_emplace(qid, groups.size());
    if (fresh) groups.push_back({qid, {}});
    groups[it->second].second.push_back(row);
  }
  Run run;
  run.reserve(groups.size());
  for (auto& [qid, rows] : groups) {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
    RankedList list{qid, {}};
    for (const auto& r : rows) list.entries.push_back(r.entry);
    run.push_back(std::move(list));
  }
  return run;
}

Run load_run(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open run file " + path.string());
  return read_run(in, path.string());
}

}  // namespace duet::eval
