#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "duet/error.hpp"
#include "duet/model/checkpoint.hpp"
#include "duet/textpipe/collection.hpp"
#include "duet/textpipe/embedding_init.hpp"
#include "duet/textpipe/lexicon.hpp"
#include "duet/train/bagging.hpp"

namespace duetrank {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

duet::textpipe::Lexicon load_vocab_dir(const fs::path& dir) {
  return duet::textpipe::load_lexicon(dir / kLexiconFile);
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw duet::IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) ensure_directory(file.parent_path());
}

struct MemberJob {
  duet::train::BagMember member;
  fs::path checkpoint;
  fs::path report;
};

struct MemberResult {
  duet::train::TrainReport report;
  std::size_t covered = 0;
};

MemberResult train_member(const TrainOptions& options, const duet::textpipe::Lexicon& lexicon,
                          const duet::train::BaggingPlan* plan, const MemberJob& job) {
  auto config = options.settings.model;
  config.vocab_size = lexicon.vocab.size();
  config.seed = job.member.seed;

  duet::textpipe::EmbeddingInit init =
      options.glove ? duet::textpipe::load_embedding_init(*options.glove, lexicon.vocab, config.embed_dim, config.seed)
                    : duet::textpipe::random_embedding_init(lexicon.vocab, config.embed_dim, config.seed);
  duet::model::DuetModel<float> model(config, init.table);

  auto open = [&] { return std::make_unique<duet::train::FileSource>(options.triples); };
  std::unique_ptr<duet::train::TripleSource> source =
      plan ? duet::train::member_source(*plan, job.member, open) : open();

  MemberResult result{duet::train::train_model(model, *source, lexicon.vocab, lexicon.idf, options.settings.train),
                      init.covered};
  ensure_parent(job.checkpoint);
  duet::model::save_checkpoint(model, job.checkpoint);
  result.report.checkpoint = job.checkpoint.string();

  ensure_parent(job.report);
  std::ofstream report(job.report, std::ios::trunc);
  if (!report) throw duet::IoError("cannot write training report " + job.report.string());
  duet::train::write_report(report, result.report);
  return result;
}

}  // namespace

void cmd_vocab(const VocabOptions& options, std::ostream& out, std::ostream&) {
  duet::textpipe::CollectionCounter counter;
  if (options.from_candidates) {
    duet::textpipe::CandidateReader reader(options.collection);
    std::unordered_set<std::int64_t> seen;
    while (auto rec = reader.next())
      if (seen.insert(rec->passage_id).second) counter.add_passage(rec->passage);
  } else {
    duet::textpipe::CollectionReader reader(options.collection);
    while (auto passage = reader.next()) counter.add_passage(*passage);
  }
  duet::textpipe::Lexicon lexicon{duet::textpipe::build_vocabulary(counter, options.cap),
                                  duet::textpipe::compute_idf(counter)};
  ensure_directory(options.out_dir);
  const auto path = options.out_dir / kLexiconFile;
  duet::textpipe::save_lexicon(path, lexicon);
  out << "N=" << lexicon.idf.passages() << " passages, " << counter.terms().size() << " distinct terms\n"
      << "vocabulary: " << lexicon.vocab.size() << " ids (" << lexicon.vocab.size() - 2
      << " terms + PAD/UNK, cap " << options.cap << ")\n"
      << "wrote " << path.string() << '\n';
}

void cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err) {
  const auto& s = options.settings;
  s.train.validate();
  {
    auto check = s.model;
    check.vocab_size = 2;
    check.validate();
  }
  const auto lexicon = load_vocab_dir(options.vocab_dir);
  if (!fs::exists(options.triples)) throw duet::IoError("cannot open " + options.triples.string());
  echo(out, s);
  out << "  vocab_size = " << lexicon.vocab.size() << '\n';

  std::vector<MemberJob> jobs;
  std::optional<duet::train::BaggingPlan> plan;
  if (s.bagging == 0) {
    const fs::path report = options.report ? *options.report : fs::path(options.out.string() + ".report.jsonl");
    jobs.push_back({{0, s.model.seed}, options.out, report});
  } else {
    plan = duet::train::make_bagging_plan(s.bagging, s.model.seed, s.sampling);
    ensure_directory(options.out);
    for (const auto& m : plan->members) {
      const auto stem = "model_" + std::to_string(m.index);
      jobs.push_back({m, options.out / (stem + ".ckpt"), options.out / (stem + ".report.jsonl")});
    }
  }

  std::vector<std::optional<MemberResult>> results(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        results[i] = train_member(options, lexicon, plan ? &*plan : nullptr, jobs[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(s.jobs, jobs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& r = results[i]->report;
    out << "model " << jobs[i].member.index << " (seed " << jobs[i].member.seed << "): " << r.adam_steps
        << " steps, final loss " << r.final_loss() << ", " << r.records_used << " triples, " << r.skipped
        << " skipped, " << static_cast<long long>(r.wall_ms) << " ms\n"
        << "  checkpoint " << jobs[i].checkpoint.string() << "\n  report " << jobs[i].report.string() << '\n';
    if (options.glove) out << "  pretrained rows " << results[i]->covered << '\n';
    if (r.shortfall > 0)
      err << "warning: model " << jobs[i].member.index << " trained on " << r.records_used << " triples, "
          << r.shortfall << " short of " << s.train.batch_size * s.train.minibatches << '\n';
  }
}

void cmd_rank(const RankOptions& options, std::ostream& out, std::ostream& err) {
  if (!options.bm25 && options.checkpoints.empty())
    throw duet::ParameterError("rank needs at least one --checkpoint, or --bm25");
  const auto lexicon = load_vocab_dir(options.vocab_dir);
  std::vector<duet::model::DuetModel<float>> models;
  for (const auto& path : options.checkpoints)
    models.push_back(duet::model::load_checkpoint(path, lexicon.vocab.size()));
  const auto queries = duet::eval::load_candidates(options.candidates);

  const auto start = Clock::now();
  duet::eval::Run run;
  std::size_t passages = 0;
  for (const auto& q : queries) {
    passages += q.passages.size();
    if (q.passages.empty()) err << "warning: query " << q.query_id << " has no candidates\n";
  }
  if (options.bm25) {
    const duet::eval::Bm25Scorer scorer(lexicon.idf, options.bm25_params);
    for (const auto& q : queries) run.push_back(duet::eval::rank_bm25(scorer, q));
  } else {
    std::vector<const duet::model::DuetModel<float>*> ptrs;
    for (const auto& m : models) ptrs.push_back(&m);
    run = duet::eval::rank_all(ptrs, queries, lexicon.vocab, lexicon.idf, options.jobs);
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  ensure_parent(options.out);
  duet::eval::save_run(options.out, run, options.format, options.run_name);
  out << "ranked " << queries.size() << " queries (" << passages << " passages) with "
      << (options.bm25 ? std::string("BM25") : std::to_string(models.size()) + " model(s)") << " in " << seconds
      << " s, " << (seconds > 0 ? static_cast<double>(queries.size()) / seconds : 0.0) << " queries/s\n"
      << "wrote " << options.out.string() << " (" << duet::eval::to_string(options.format) << ")\n";
}

void cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  const auto run = duet::eval::load_run(options.run);
  const auto qrels = duet::eval::load_qrels(options.qrels);
  const auto result = duet::eval::mrr_at_k(run, qrels, options.k);
  if (result.missing_queries > 0)
    err << "warning: " << result.missing_queries << " of " << result.judged_queries
        << " judged queries are missing from the run and score 0\n";
  duet::eval::write_metrics(out, result);
  if (options.out) {
    ensure_parent(*options.out);
    std::ofstream file(*options.out, std::ios::trunc);
    if (!file) throw duet::IoError("cannot write metrics " + options.out->string());
    duet::eval::write_metrics(file, result);
  }
}

}  // namespace duetrank
