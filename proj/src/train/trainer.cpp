#include "duet/train/trainer.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "duet/error.hpp"
#include "duet/textpipe/tokenizer.hpp"

namespace duet::train {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(sigma > 0)) throw ParameterError("sigma must be positive");
  if (!(lr > 0)) throw ParameterError("learning rate must be positive");
  if (batch_size < 1) throw ParameterError("batch size must be at least 1");
}

std::optional<EncodedTriple> encode_triple(const Triple& t, const model::ModelConfig& config,
                                           const textpipe::Vocabulary& vocab) {
  auto q = textpipe::tokenize(t.query);
  auto p = textpipe::tokenize(t.positive);
  auto n = textpipe::tokenize(t.negative);
  if (q.empty() || p.empty() || n.empty()) return std::nullopt;
  return EncodedTriple{textpipe::encode_tokens(q, config.query_cap, vocab),
                       textpipe::encode_tokens(p, config.passage_cap, vocab),
                       textpipe::encode_tokens(n, config.passage_cap, vocab)};
}

template <typename T>
double minibatch_loss(const model::DuetModel<T>& model, std::span<const EncodedTriple> batch,
                      const textpipe::IdfTable& idf, double sigma, std::mt19937_64& rng, bool accumulate) {
  if (batch.empty()) throw ParameterError("minibatch_loss: empty batch");
  const T weight = T(1) / static_cast<T>(batch.size());
  double total = 0.0;
  for (const auto& t : batch) {
    ndgrad::Tape<T> tape;
    tape.set_grad_enabled(accumulate);
    auto sp = model.forward(tape, t.query, t.positive, idf, true, rng);
    auto sn = model.forward(tape, t.query, t.negative, idf, true, rng);
    auto loss = ranknet_loss(tape, ndgrad::sub(tape, sp, sn), static_cast<T>(sigma));
    total += static_cast<double>(loss.item());
    if (accumulate) tape.backward(loss, weight);
  }
  const double mean = total / static_cast<double>(batch.size());
  if (!std::isfinite(mean)) throw NumericError("minibatch loss is not finite");
  return mean;
}

template double minibatch_loss(const model::DuetModel<float>&, std::span<const EncodedTriple>,
                               const textpipe::IdfTable&, double, std::mt19937_64&, bool);
template double minibatch_loss(const model::DuetModel<double>&, std::span<const EncodedTriple>,
                               const textpipe::IdfTable&, double, std::mt19937_64&, bool);

TrainReport train_model(model::DuetModel<float>& model, TripleSource& source, const textpipe::Vocabulary& vocab,
                        const textpipe::IdfTable& idf, const TrainConfig& config, const ProgressFn& progress) {
  config.validate();
  const auto start = Clock::now();
  TrainReport report;
  report.model_config = model.config();
  report.train_config = config;

  ndgrad::Adam<float> adam(model.parameters(), {.lr = config.lr});
  std::mt19937_64 dropout_rng(model.config().seed ^ 0xD1B54A32D192ED03ull);

  bool exhausted = false;
  bool rewound_without_data = false;
  std::vector<EncodedTriple> batch;
  batch.reserve(config.batch_size);
  for (std::size_t step = 1; step <= config.minibatches && !exhausted; ++step) {
    const auto t0 = Clock::now();
    batch.clear();
    while (batch.size() < config.batch_size) {
      auto raw = source.next();
      if (!raw) {
        // A recycled stream that yields nothing usable in a full pass would
        // loop forever.
        if (!config.recycle || rewound_without_data) {
          exhausted = true;
          break;
        }
        source.rewind();
        rewound_without_data = true;
        continue;
      }
      ++report.records_read;
      auto encoded = encode_triple(*raw, model.config(), vocab);
      if (!encoded) {
        ++report.skipped;
        continue;
      }
      rewound_without_data = false;
      batch.push_back(std::move(*encoded));
    }
    if (batch.empty()) break;

    adam.zero_grad();
    double loss = 0.0;
    try {
      loss = minibatch_loss(model, std::span<const EncodedTriple>(batch), idf, config.sigma, dropout_rng, true);
    } catch (const NumericError& e) {
      throw NumericError("minibatch " + std::to_string(step) + ": " + e.what());
    }
    adam.step();
    report.records_used += batch.size();
    report.batches.push_back({step, batch.size(), loss, ms_since(t0)});
    if (progress) progress(report.batches.back());
  }
  report.adam_steps = adam.steps();
  const std::size_t requested = config.batch_size * config.minibatches;
  report.shortfall = requested > report.records_used ? requested - report.records_used : 0;
  report.wall_ms = ms_since(start);
  return report;
}

void write_report(std::ostream& out, const TrainReport& report) {
  using nlohmann::json;
  for (const auto& b : report.batches)
    out << json{{"step", b.step}, {"loss", b.loss}, {"elapsed_ms", b.elapsed_ms}, {"size", b.size}}.dump()
        << '\n';
  json model_config = json::object();
  for (const auto& [k, v] : report.model_config.to_pairs()) model_config[k] = v;
  const auto& tc = report.train_config;
  json summary = {
      {"steps", report.adam_steps},
      {"final_loss", report.final_loss()},
      {"records_read", report.records_read},
      {"records_used", report.records_used},
      {"skipped", report.skipped},
      {"shortfall", report.shortfall},
      {"wall_ms", report.wall_ms},
      {"checkpoint", report.checkpoint},
      {"model_config", model_config},
      {"train_config",
       {{"sigma", tc.sigma}, {"lr", tc.lr}, {"batch_size", tc.batch_size}, {"minibatches", tc.minibatches},
        {"recycle", tc.recycle}}},
  };
  out << json{{"summary", summary}}.dump() << '\n';
}

}  // namespace duet::train
