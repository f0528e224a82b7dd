#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "duet/eval/bm25.hpp"
#include "duet/eval/metrics.hpp"
#include "duet/eval/run_io.hpp"
#include "duet/textpipe/vocabulary.hpp"
#include "settings.hpp"

namespace duetrank {

inline constexpr const char* kLexiconFile = "lexicon.tsv";

struct VocabOptions {
  std::filesystem::path collection;
  std::filesystem::path out_dir;
  std::size_t cap = duet::textpipe::Vocabulary::kDefaultCap;
  bool from_candidates = false;
};

struct TrainOptions {
  std::filesystem::path triples;
  std::filesystem::path vocab_dir;
  std::filesystem::path out;  // checkpoint, or a directory under --bagging
  std::optional<std::filesystem::path> report;
  std::optional<std::filesystem::path> glove;
  Settings settings;
};

struct RankOptions {
  std::vector<std::filesystem::path> checkpoints;
  std::filesystem::path candidates;
  std::filesystem::path vocab_dir;
  std::filesystem::path out;
  duet::eval::RunFormat format = duet::eval::RunFormat::trec;
  std::string run_name = "duetrank";
  std::size_t jobs = 1;
  bool bm25 = false;
  duet::eval::Bm25Params bm25_params;
};

struct EvalOptions {
  std::filesystem::path run;
  std::filesystem::path qrels;
  std::size_t k = duet::eval::kDefaultCutoff;
  std::optional<std::filesystem::path> out;
};

// Each command reports progress on `out`, warnings on `err`, and throws
// duet::Error subclasses on failure.
void cmd_vocab(const VocabOptions& options, std::ostream& out, std::ostream& err);
void cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);
void cmd_rank(const RankOptions& options, std::ostream& out, std::ostream& err);
void cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);

}  // namespace duetrank
