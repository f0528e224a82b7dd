#include "duet/model/config.hpp"

#include <charconv>
#include <cstdio>

#include "duet/error.hpp"

namespace duet::model {
namespace {

template <typename Int>
Int parse_uint(std::string_view key, std::string_view v) {
  Int out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw ParameterError("config: '" + std::string(key) + "' needs a non-negative integer, got '" +
                         std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw ParameterError("config: '" + std::string(key) + "' needs on/off, got '" + std::string(v) + "'");
}

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, end);
}

}  // namespace

std::string_view to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }
std::string_view to_string(Combiner c) { return c == Combiner::mlp ? "mlp" : "linear"; }

void ModelConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("model config: ") + what);
  };
  need(query_cap >= 1, "query_cap must be >= 1");
  need(passage_cap >= 1, "passage_cap must be >= 1");
  need(hidden >= 1, "hidden must be >= 1");
  need(embed_dim >= 1, "embed_dim must be >= 1");
  need(vocab_size >= 2, "vocab_size must include PAD and UNK");
  need(dropout >= 0.0 && dropout < 1.0, "dropout must be in [0, 1)");
  need(conv_width >= 1, "conv_width must be >= 1");
  need(pool_window >= 1 && pool_window <= passage_cap, "pool_window must be in [1, passage_cap]");
}

std::vector<std::pair<std::string, std::string>> ModelConfig::to_pairs() const {
  return {
      {"query_cap", std::to_string(query_cap)},
      {"passage_cap", std::to_string(passage_cap)},
      {"hidden", std::to_string(hidden)},
      {"embed_dim", std::to_string(embed_dim)},
      {"vocab_size", std::to_string(vocab_size)},
      {"activation", std::string(to_string(activation))},
      {"combiner", std::string(to_string(combiner))},
      {"idf_weighting", idf_weighting ? "on" : "off"},
      {"dropout", format_double(dropout)},
      {"conv_width", std::to_string(conv_width)},
      {"pool_window", std::to_string(pool_window)},
      {"seed", std::to_string(seed)},
      {"share_embeddings", share_embeddings ? "on" : "off"},
      {"freeze_embeddings", freeze_embeddings ? "on" : "off"},
  };
}

bool ModelConfig::set(std::string_view key, std::string_view value) {
  if (key == "query_cap") query_cap = parse_uint<std::size_t>(key, value);
  else if (key == "passage_cap") passage_cap = parse_uint<std::size_t>(key, value);
  else if (key == "hidden") hidden = parse_uint<std::size_t>(key, value);
  else if (key == "embed_dim") embed_dim = parse_uint<std::size_t>(key, value);
  else if (key == "vocab_size") vocab_size = parse_uint<std::size_t>(key, value);
  else if (key == "conv_width") conv_width = parse_uint<std::size_t>(key, value);
  else if (key == "pool_window") pool_window = parse_uint<std::size_t>(key, value);
  else if (key == "seed") seed = parse_uint<std::uint64_t>(key, value);
  else if (key == "idf_weighting") idf_weighting = parse_bool(key, value);
  else if (key == "share_embeddings") share_embeddings = parse_bool(key, value);
  else if (key == "freeze_embeddings") freeze_embeddings = parse_bool(key, value);
  else if (key == "activation") {
    if (value == "relu") activation = Activation::relu;
    else if (value == "tanh") activation = Activation::tanh;
    else throw ParameterError("config: activation must be relu or tanh, got '" + std::string(value) + "'");
  } else if (key == "combiner") {
    if (value == "mlp") combiner = Combiner::mlp;
    else if (value == "linear") combiner = Combiner::linear;
    else throw ParameterError("config: combiner must be mlp or linear, got '" + std::string(value) + "'");
  } else if (key == "dropout") {
    const std::string s(value);
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
      throw ParameterError("config: dropout needs a number, got '" + s + "'");
    dropout = d;
  } else {
    return false;
  }
  return true;
}

std::string serialize(const ModelConfig& config) {
  std::string out;
  for (const auto& [k, v] : config.to_pairs()) out += k + "=" + v + "\n";
  return out;
}

ModelConfig parse_model_config(std::string_view text) {
  ModelConfig config;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = text.substr(start, nl - start);
    start = nl + 1;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw FormatError("config block: missing '=' in '" + std::string(line) + "'");
    try {
      if (!config.set(line.substr(0, eq), line.substr(eq + 1)))
        throw FormatError("config block: unknown key '" + std::string(line.substr(0, eq)) + "'");
    } catch (const ParameterError& e) {
      throw FormatError(std::string("config block: ") + e.what());
    }
  }
  return config;
}

}  // namespace duet::model
