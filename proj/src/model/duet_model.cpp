#include "duet/model/duet_model.hpp"

#include <cmath>

#include "duet/error.hpp"
#include "duet/textpipe/embedding_init.hpp"

namespace duet::model {

namespace nd = ndgrad;

std::size_t embedding_parameter_count(const ModelConfig& c) {
  return c.vocab_size * c.embed_dim * (c.share_embeddings ? 1 : 2);
}

std::size_t parameter_count(const ModelConfig& c) {
  const std::size_t h = c.hidden, e = c.embed_dim, q = c.query_cap, p = c.passage_cap;
  const std::size_t local = (p * h + h) + (q * h * h + h) + (h * h + h);
  const std::size_t conv = h * e * c.conv_width + h;
  const std::size_t distributed =
      2 * conv + 2 * (h * h + h) + (c.passage_windows() * h * h + h) + (h * h + h);
  const std::size_t combiner = c.combiner == Combiner::mlp
                                   ? (2 * h * h + h) + (h * h + h) + (h + 1)
                                   : 2 * (h + 1) + (2 + 1);
  return embedding_parameter_count(c) + local + distributed + combiner;
}

template <typename T>
DuetModel<T>::DuetModel(ModelConfig config, Uninitialized) : config_(std::move(config)) {
  config_.validate();
  allocate();
}

template <typename T>
DuetModel<T>::DuetModel(ModelConfig config) : DuetModel(std::move(config), Uninitialized{}) {
  initialize({});
}

template <typename T>
DuetModel<T>::DuetModel(ModelConfig config, std::span<const float> embedding_init)
    : DuetModel(std::move(config), Uninitialized{}) {
  if (embedding_init.size() != config_.vocab_size * config_.embed_dim)
    throw DimensionError("embedding init has " + std::to_string(embedding_init.size()) +
                         " values, model needs " + std::to_string(config_.vocab_size) + "×" +
                         std::to_string(config_.embed_dim));
  initialize(embedding_init);
}

template <typename T>
void DuetModel<T>::allocate() {
  const auto& c = config_;
  const std::size_t h = c.hidden;
  auto dense = [](std::size_t in, std::size_t out) {
    return Dense<T>{Tensor<T>::zeros({in, out}, true), Tensor<T>::zeros({out}, true)};
  };
  embedding_ = Tensor<T>::zeros({c.vocab_size, c.embed_dim}, !c.freeze_embeddings);
  if (!c.share_embeddings)
    passage_embedding_ = Tensor<T>::zeros({c.vocab_size, c.embed_dim}, !c.freeze_embeddings);
  local_proj_ = dense(c.passage_cap, h);
  local_fc1_ = dense(c.query_cap * h, h);
  local_fc2_ = dense(h, h);
  query_conv_ = {Tensor<T>::zeros({h, c.embed_dim, c.conv_width}, true), Tensor<T>::zeros({h}, true)};
  query_fc_ = dense(h, h);
  passage_conv_ = {Tensor<T>::zeros({h, c.embed_dim, c.conv_width}, true), Tensor<T>::zeros({h}, true)};
  passage_fc_ = dense(h, h);
  dist_fc1_ = dense(c.passage_windows() * h, h);
  dist_fc2_ = dense(h, h);
  if (c.combiner == Combiner::mlp) {
    comb_fc1_ = dense(2 * h, h);
    comb_fc2_ = dense(h, h);
    comb_out_ = dense(h, 1);
  } else {
    local_head_ = dense(h, 1);
    dist_head_ = dense(h, 1);
    mix_ = dense(2, 1);
  }
}

template <typename T>
std::vector<Parameter<T>> DuetModel<T>::parameters() const {
  std::vector<Parameter<T>> out;
  auto add = [&out](const std::string& name, const Dense<T>& d) {
    out.push_back({name + ".weight", d.weight});
    out.push_back({name + ".bias", d.bias});
  };
  out.push_back({"embedding", embedding_});
  if (!config_.share_embeddings) out.push_back({"embedding.passage", passage_embedding_});
  add("local.proj", local_proj_);
  add("local.fc1", local_fc1_);
  add("local.fc2", local_fc2_);
  add("dist.query_conv", query_conv_);
  add("dist.query_fc", query_fc_);
  add("dist.passage_conv", passage_conv_);
  add("dist.passage_fc", passage_fc_);
  add("dist.fc1", dist_fc1_);
  add("dist.fc2", dist_fc2_);
  if (config_.combiner == Combiner::mlp) {
    add("comb.fc1", comb_fc1_);
    add("comb.fc2", comb_fc2_);
    add("comb.out", comb_out_);
  } else {
    add("comb.local_head", local_head_);
    add("comb.dist_head", dist_head_);
    add("comb.mix", mix_);
  }
  return out;
}

template <typename T>
std::size_t DuetModel<T>::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.tensor.size();
  return n;
}

template <typename T>
void DuetModel<T>::initialize(std::span<const float> embedding_init) {
  textpipe::EmbeddingInit random;
  if (embedding_init.empty()) {
    random = textpipe::random_embedding_init(config_.vocab_size, config_.embed_dim, config_.seed);
    embedding_init = random.table;
  }
  for (auto* table : {&embedding_, &passage_embedding_}) {
    if (!table->defined()) continue;
    auto dst = table->data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(embedding_init[i]);
    std::fill_n(dst.begin(), config_.embed_dim, T(0));
  }

  std::mt19937_64 rng(config_.seed ^ 0x9E3779B97F4A7C15ull);
  for (auto& p : parameters()) {
    if (p.name.starts_with("embedding") || p.name.ends_with(".bias")) continue;
    const auto& s = p.tensor.shape();
    double fan_in = 0, fan_out = 0;
    if (s.size() == 3) {  // conv: filters × channels × width
      fan_in = static_cast<double>(s[1] * s[2]);
      fan_out = static_cast<double>(s[0] * s[2]);
    } else {
      fan_in = static_cast<double>(s[0]);
      fan_out = static_cast<double>(s[1]);
    }
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (auto& v : p.tensor.data()) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      v = static_cast<T>((2.0 * u - 1.0) * limit);
    }
  }
}

template <typename T>
Tensor<T> DuetModel<T>::activate(Tape<T>& tape, const Tensor<T>& x) const {
  return config_.activation == Activation::relu ? nd::relu(tape, x) : nd::tanh_act(tape, x);
}

template <typename T>
Tensor<T> DuetModel<T>::hidden(Tape<T>& tape, const Tensor<T>& x, const Dense<T>& layer,
                               bool training, std::mt19937_64& rng) const {
  auto h = activate(tape, nd::linear(tape, x, layer.weight, layer.bias));
  return nd::dropout(tape, h, config_.dropout, training, rng);
}

template <typename T>
Tensor<T> DuetModel<T>::local_forward(Tape<T>& tape, const InteractionMatrix& x, bool training,
                                      std::mt19937_64& rng) const {
  if (x.rows != config_.query_cap || x.cols != config_.passage_cap)
    throw DimensionError("local_forward: interaction matrix is " + std::to_string(x.rows) + "×" +
                         std::to_string(x.cols) + ", model expects " + std::to_string(config_.query_cap) +
                         "×" + std::to_string(config_.passage_cap));
  std::vector<T> values(x.values.begin(), x.values.end());
  auto input = Tensor<T>::from({x.rows, x.cols}, std::move(values));
  auto per_term = hidden(tape, input, local_proj_, training, rng);  // query_cap × hidden
  auto flat = nd::reshape(tape, per_term, {1, config_.query_cap * config_.hidden});
  auto h1 = hidden(tape, flat, local_fc1_, training, rng);
  return hidden(tape, h1, local_fc2_, training, rng);
}

template <typename T>
Tensor<T> DuetModel<T>::distributed_forward(Tape<T>& tape, const textpipe::TermSequence& query,
                                            const textpipe::TermSequence& passage, bool training,
                                            std::mt19937_64& rng) const {
  if (query.capacity() != config_.query_cap || passage.capacity() != config_.passage_cap)
    throw DimensionError("distributed_forward: sequences of capacity " + std::to_string(query.capacity()) +
                         "/" + std::to_string(passage.capacity()) + ", model expects " +
                         std::to_string(config_.query_cap) + "/" + std::to_string(config_.passage_cap));
  const std::size_t h = config_.hidden;
  const auto pad = textpipe::Vocabulary::kPad;

  auto q_emb = nd::embedding_gather<T>(tape, embedding_, query.ids, pad);
  auto q_conv = activate(tape, nd::conv1d(tape, nd::transpose(tape, q_emb), query_conv_.weight,
                                          &query_conv_.bias, nd::Padding::same));
  auto q_pool = nd::max_pool(tape, q_conv, config_.query_cap, 1, query.length());
  auto q_vec = hidden(tape, nd::reshape(tape, q_pool, {1, h}), query_fc_, training, rng);

  const auto& p_table = config_.share_embeddings ? embedding_ : passage_embedding_;
  auto p_emb = nd::embedding_gather<T>(tape, p_table, passage.ids, pad);
  auto p_conv = activate(tape, nd::conv1d(tape, nd::transpose(tape, p_emb), passage_conv_.weight,
                                          &passage_conv_.bias, nd::Padding::same));
  auto p_pool = nd::max_pool(tape, p_conv, config_.pool_window, 1, passage.length());
  auto p_vecs = hidden(tape, nd::transpose(tape, p_pool), passage_fc_, training, rng);  // windows × hidden

  auto matched = nd::mul_rows(tape, p_vecs, q_vec);
  auto flat = nd::reshape(tape, matched, {1, config_.passage_windows() * h});
  auto h1 = hidden(tape, flat, dist_fc1_, training, rng);
  return hidden(tape, h1, dist_fc2_, training, rng);
}

template <typename T>
Tensor<T> DuetModel<T>::combine_and_score(Tape<T>& tape, const Tensor<T>& local,
                                          const Tensor<T>& distributed, bool training,
                                          std::mt19937_64& rng) const {
  const std::size_t h = config_.hidden;
  if (local.size() != h || distributed.size() != h)
    throw DimensionError("combine_and_score: expected two " + std::to_string(h) + "-vectors, got " +
                         nd::to_string(local.shape()) + " and " + nd::to_string(distributed.shape()));
  auto l = nd::reshape(tape, local, {1, h});
  auto d = nd::reshape(tape, distributed, {1, h});
  if (config_.combiner == Combiner::mlp) {
    const Tensor<T> parts[] = {l, d};
    auto joined = nd::concat<T>(tape, parts, 1);
    auto h1 = hidden(tape, joined, comb_fc1_, training, rng);
    auto h2 = hidden(tape, h1, comb_fc2_, training, rng);
    return nd::linear(tape, h2, comb_out_.weight, comb_out_.bias);
  }
  const Tensor<T> scores[] = {nd::linear(tape, l, local_head_.weight, local_head_.bias),
                              nd::linear(tape, d, dist_head_.weight, dist_head_.bias)};
  return nd::linear(tape, nd::concat<T>(tape, scores, 1), mix_.weight, mix_.bias);
}

template <typename T>
Tensor<T> DuetModel<T>::forward(Tape<T>& tape, const textpipe::TermSequence& query,
                                const textpipe::TermSequence& passage, const textpipe::IdfTable& idf,
                                bool training, std::mt19937_64& rng) const {
  const auto x = build_interaction_matrix(query, passage, idf, config_.idf_weighting);
  auto local = local_forward(tape, x, training, rng);
  auto distributed = distributed_forward(tape, query, passage, training, rng);
  return combine_and_score(tape, local, distributed, training, rng);
}

template <typename T>
T DuetModel<T>::score(const textpipe::TermSequence& query, const textpipe::TermSequence& passage,
                      const textpipe::IdfTable& idf) const {
  Tape<T> tape;
  tape.set_grad_enabled(false);
  std::mt19937_64 unused(0);
  return forward(tape, query, passage, idf, false, unused).item();
}

template <typename T>
template <typename U>
DuetModel<U> DuetModel<T>::cast() const {
  DuetModel<U> out(config_, typename DuetModel<U>::Uninitialized{});
  const auto src = parameters();
  auto dst = out.parameters();
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto from = src[i].tensor.data();
    auto to = dst[i].tensor.data();
    for (std::size_t j = 0; j < from.size(); ++j) to[j] = static_cast<U>(from[j]);
  }
  return out;
}

template class DuetModel<float>;
template class DuetModel<double>;
template DuetModel<double> DuetModel<float>::cast<double>() const;
template DuetModel<float> DuetModel<double>::cast<float>() const;
template DuetModel<float> DuetModel<float>::cast<float>() const;

}  // namespace duet::model
