#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "duet/model/duet_model.hpp"

namespace duet::model {

inline constexpr char kCheckpointMagic[8] = {'D', 'U', 'E', 'T', '2', 'x', '0', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout, all integers little-endian:
//   magic "DUET2x01" | u32 version | u32 n + n bytes of serialize(config)
//   | u32 parameter count | per parameter: u16 n + name, u8 rank,
//   rank × u32 dims, numel × f32
void write_checkpoint(std::ostream& out, const DuetModel<float>& model);
void save_checkpoint(const DuetModel<float>& model, const std::filesystem::path& path);

// Rebuilds the model from the embedded config and checks every parameter's
// name and shape against it. Bad magic, version or truncation throw
// FormatError naming the byte offset. When `expected_vocab_size` is given
// and differs from the stored config, throws ConfigMismatchError.
DuetModel<float> read_checkpoint(std::istream& in, const std::string& source,
                                 std::optional<std::size_t> expected_vocab_size = std::nullopt);
DuetModel<float> load_checkpoint(const std::filesystem::path& path,
                                 std::optional<std::size_t> expected_vocab_size = std::nullopt);

// Config block only, without reading the tensors.
ModelConfig read_checkpoint_config(const std::filesystem::path& path);

}  // namespace duet::model
