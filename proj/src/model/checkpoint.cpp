#include "duet/model/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "duet/error.hpp"

namespace duet::model {
namespace {

template <typename U>
void put(std::ostream& out, U v) {
  char buf[sizeof v];
  for (std::size_t i = 0; i < sizeof v; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, sizeof v);
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  template <typename U>
  U get(const char* what) {
    unsigned char buf[sizeof(U)];
    bytes(reinterpret_cast<char*>(buf), sizeof buf, what);
    U v = 0;
    for (std::size_t i = 0; i < sizeof buf; ++i) v |= static_cast<U>(static_cast<U>(buf[i]) << (8 * i));
    return v;
  }

  void bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      fail(std::string("truncated while reading ") + what);
    offset_ += n;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormatError(source_ + ": offset " + std::to_string(offset_) + ": " + msg);
  }

  std::size_t offset() const { return offset_; }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t offset_ = 0;
};

ModelConfig read_header(Reader& r) {
  char magic[8];
  r.bytes(magic, sizeof magic, "magic");
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) r.fail("bad magic, not a checkpoint");
  const auto at = r.offset();
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion)
    throw FormatError("offset " + std::to_string(at) + ": unsupported checkpoint version " +
                      std::to_string(version));
  const auto n = r.get<std::uint32_t>("config length");
  std::string text(n, '\0');
  r.bytes(text.data(), n, "config block");
  try {
    return parse_model_config(text);
  } catch (const Error& e) {
    r.fail(std::string("config block: ") + e.what());
  }
}

}  // namespace

void write_checkpoint(std::ostream& out, const DuetModel<float>& model) {
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  const auto text = serialize(model.config());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  const auto params = model.parameters();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put<std::uint8_t>(out, static_cast<std::uint8_t>(p.tensor.rank()));
    for (auto d : p.tensor.shape()) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    const auto data = p.tensor.data();
    if constexpr (std::endian::native == std::endian::little) {
      out.write(reinterpret_cast<const char*>(data.data()),
                static_cast<std::streamsize>(data.size() * sizeof(float)));
    } else {
      for (float v : data) put(out, std::bit_cast<std::uint32_t>(v));
    }
  }
}

void save_checkpoint(const DuetModel<float>& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  write_checkpoint(out, model);
  out.flush();
  if (!out) throw IoError("error while writing checkpoint " + path.string());
}

DuetModel<float> read_checkpoint(std::istream& in, const std::string& source,
                                 std::optional<std::size_t> expected_vocab_size) {
  Reader r(in, source);
  auto config = read_header(r);
  if (expected_vocab_size && *expected_vocab_size != config.vocab_size)
    throw ConfigMismatchError(source + ": checkpoint vocab_size " + std::to_string(config.vocab_size) +
                              " does not match vocabulary size " + std::to_string(*expected_vocab_size));
  try {
    config.validate();
  } catch (const ParameterError& e) {
    r.fail(std::string("invalid config: ") + e.what());
  }

  auto model = DuetModel<float>::zeroed(config);
  auto params = model.parameters();
  const auto at = r.offset();
  const auto count = r.get<std::uint32_t>("parameter count");
  if (count != params.size())
    throw ConfigMismatchError(source + ": offset " + std::to_string(at) + ": " + std::to_string(count) +
                              " parameters stored, config implies " + std::to_string(params.size()));
  for (auto& p : params) {
    const auto name_at = r.offset();
    std::string name(r.get<std::uint16_t>("name length"), '\0');
    r.bytes(name.data(), name.size(), "parameter name");
    if (name != p.name)
      throw ConfigMismatchError(source + ": offset " + std::to_string(name_at) + ": expected parameter " +
                                p.name + ", found " + name);
    ndgrad::Shape shape(r.get<std::uint8_t>("rank"));
    for (auto& d : shape) d = r.get<std::uint32_t>("dimension");
    if (shape != p.tensor.shape())
      throw ConfigMismatchError(source + ": parameter " + name + " has shape " + ndgrad::to_string(shape) +
                                ", config implies " + ndgrad::to_string(p.tensor.shape()));
    auto data = p.tensor.data();
    if constexpr (std::endian::native == std::endian::little) {
      r.bytes(reinterpret_cast<char*>(data.data()), data.size() * sizeof(float), "parameter data");
    } else {
      for (auto& v : data) v = std::bit_cast<float>(r.get<std::uint32_t>("parameter data"));
    }
  }
  return model;
}

DuetModel<float> load_checkpoint(const std::filesystem::path& path,
                                 std::optional<std::size_t> expected_vocab_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  return read_checkpoint(in, path.string(), expected_vocab_size);
}

ModelConfig read_checkpoint_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  Reader r(in, path.string());
  return read_header(r);
}

}  // namespace duet::model
