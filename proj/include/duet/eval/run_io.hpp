#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "duet/eval/ranking.hpp"

namespace duet::eval {

enum class RunFormat { trec, marco };
std::string_view to_string(RunFormat f);
RunFormat parse_run_format(std::string_view text);  // throws ParameterError

// trec:  qid Q0 pid rank score run_name   (score with 6 decimals)
// marco: qid<TAB>pid<TAB>rank
// Ranks are 1-based, in list order.
void write_run(std::ostream& out, const Run& run, RunFormat format, std::string_view run_name = "duetrank");
void save_run(const std::filesystem::path& path, const Run& run, RunFormat format,
              std::string_view run_name = "duetrank");

// Parses either format (detected per line by field count). Lists keep file
// order grouped by query; lines within a query are ordered by rank. Marco
// lines carry no score, so scores are set to -rank. Throws FormatError
// naming source:line.
Run read_run(std::istream& in, const std::string& source);
Run load_run(const std::filesystem::path& path);

}  // namespace duet::eval
