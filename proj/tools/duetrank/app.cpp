#include "app.hpp"

#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "duet/error.hpp"

namespace duetrank {
namespace {

std::string flag_name(std::string key) {
  for (auto& c : key)
    if (c == '_') c = '-';
  return "--" + key;
}

const char* describe(const std::string& key) {
  static const std::map<std::string, const char*> text = {
      {"query_cap", "query terms kept"},
      {"passage_cap", "passage terms kept"},
      {"hidden", "hidden layer width"},
      {"embed_dim", "word embedding size"},
      {"activation", "relu or tanh"},
      {"combiner", "mlp or linear"},
      {"idf_weighting", "weight exact matches by IDF (on/off)"},
      {"dropout", "dropout rate"},
      {"conv_width", "convolution width"},
      {"pool_window", "passage max-pool window"},
      {"seed", "random seed (bagged model k uses seed + k)"},
      {"share_embeddings", "one embedding table for query and passage (on/off)"},
      {"freeze_embeddings", "keep embeddings fixed (on/off)"},
      {"sigma", "RankNet sigma"},
      {"lr", "Adam learning rate"},
      {"batch_size", "triples per minibatch"},
      {"minibatches", "number of minibatches (Adam steps)"},
      {"recycle", "restart the triples file when it runs out (on/off)"},
      {"bagging", "train N models into the --out directory (0: single model)"},
      {"sampling", "bagging sample scheme: shuffle or bootstrap"},
      {"jobs", "parallel training runs"},
  };
  auto it = text.find(key);
  return it == text.end() ? "" : it->second;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const char* seed_variable) {
  CLI::App app{"Duet v2 passage re-ranking: vocabulary, training, ranking and MRR evaluation", "duetrank"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  VocabOptions vocab;
  auto* vocab_cmd = app.add_subcommand("vocab", "build the capped vocabulary and IDF table");
  vocab_cmd->add_option("collection", vocab.collection, "passages, one per line (optionally id<TAB>text)")
      ->required();
  vocab_cmd->add_option("--out", vocab.out_dir, "output directory for lexicon.tsv")->required();
  vocab_cmd->add_option("--cap", vocab.cap, "vocabulary size cap")->capture_default_str();
  vocab_cmd->add_flag("--from-candidates", vocab.from_candidates,
                      "read a qid/pid/query/passage candidates file, counting each passage id once");

  TrainOptions train;
  std::optional<std::string> config_file, glove, report;
  std::map<std::string, std::optional<std::string>> overrides;
  bool no_idf = false, tanh = false, linear = false;
  auto* train_cmd = app.add_subcommand("train", "train one model or a bagged ensemble on triples");
  train_cmd->add_option("triples", train.triples, "query<TAB>positive<TAB>negative file")->required();
  train_cmd->add_option("--vocab", train.vocab_dir, "directory written by 'duetrank vocab'")->required();
  train_cmd->add_option("--out", train.out, "checkpoint path (directory with --bagging)")->required();
  train_cmd->add_option("--config", config_file, "settings file of 'key = value' lines");
  train_cmd->add_option("--glove", glove, "pretrained word vectors (token then floats per line)");
  train_cmd->add_option("--report", report, "JSON-lines report (default: <out>.report.jsonl)");
  const Settings defaults;
  for (const auto& [key, value] : defaults.to_pairs())
    train_cmd->add_option(flag_name(key), overrides[key], describe(key))->default_str(value)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  train_cmd->add_flag("--no-idf", no_idf, "ablation: binary exact-match matrix (idf_weighting = off)");
  train_cmd->add_flag("--tanh", tanh, "ablation: tanh activations (activation = tanh)");
  train_cmd->add_flag("--linear-combine", linear, "ablation: linear score combination (combiner = linear)");

  RankOptions rank;
  std::string format = "trec";
  auto* rank_cmd = app.add_subcommand("rank", "re-rank a candidates file with one or more checkpoints");
  rank_cmd->add_option("--checkpoint", rank.checkpoints, "model checkpoint; repeat to fuse an ensemble by mean score");
  rank_cmd->add_option("--candidates", rank.candidates, "qid<TAB>pid<TAB>query<TAB>passage file")->required();
  rank_cmd->add_option("--vocab", rank.vocab_dir, "directory written by 'duetrank vocab'")->required();
  rank_cmd->add_option("--out", rank.out, "run file to write")->required();
  rank_cmd->add_option("--format", format, "trec or marco")->capture_default_str();
  rank_cmd->add_option("--run-name", rank.run_name, "run tag for trec output")->capture_default_str();
  rank_cmd->add_option("--jobs", rank.jobs, "scoring threads")->capture_default_str()->check(CLI::PositiveNumber);
  rank_cmd->add_flag("--bm25", rank.bm25, "rank with BM25 instead of a model");
  rank_cmd->add_option("--k1", rank.bm25_params.k1, "BM25 k1")->capture_default_str();
  rank_cmd->add_option("--b", rank.bm25_params.b, "BM25 b")->capture_default_str();

  EvalOptions eval;
  std::optional<std::string> metrics_out;
  auto* eval_cmd = app.add_subcommand("eval", "compute MRR@k of a run against qrels");
  eval_cmd->add_option("run", eval.run, "trec or marco run file")->required();
  eval_cmd->add_option("qrels", eval.qrels, "qid 0 pid relevance file")->required();
  eval_cmd->add_option("--k", eval.k, "rank cutoff")->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", metrics_out, "also write the metrics JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*vocab_cmd) {
      cmd_vocab(vocab, out, err);
    } else if (*train_cmd) {
      apply_seed_variable(train.settings, seed_variable);
      if (config_file) apply_config_file(train.settings, *config_file);
      for (const auto& [key, value] : overrides)
        if (value) train.settings.set(key, *value);
      if (no_idf) train.settings.model.idf_weighting = false;
      if (tanh) train.settings.model.activation = duet::model::Activation::tanh;
      if (linear) train.settings.model.combiner = duet::model::Combiner::linear;
      if (glove) train.glove = *glove;
      if (report) train.report = *report;
      cmd_train(train, out, err);
    } else if (*rank_cmd) {
      rank.format = duet::eval::parse_run_format(format);
      cmd_rank(rank, out, err);
    } else if (*eval_cmd) {
      if (metrics_out) eval.out = *metrics_out;
      cmd_eval(eval, out, err);
    }
  } catch (const duet::NumericError& e) {
    err << "duetrank: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const duet::ConfigMismatchError& e) {
    err << "duetrank: config mismatch: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const duet::IoError& e) {
    err << "duetrank: " << e.what() << '\n';
    return kExitInput;
  } catch (const duet::FormatError& e) {
    err << "duetrank: " << e.what() << '\n';
    return kExitInput;
  } catch (const duet::ParameterError& e) {
    err << "duetrank: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "duetrank: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace duetrank
