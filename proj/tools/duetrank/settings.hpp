#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "duet/model/config.hpp"
#include "duet/train/bagging.hpp"
#include "duet/train/trainer.hpp"

namespace duetrank {

// Everything `duetrank train` can be told. Sources apply in increasing
// precedence: defaults, DUETRANK_SEED, config file, command-line flags.
struct Settings {
  duet::model::ModelConfig model;
  duet::train::TrainConfig train;
  std::size_t bagging = 0;  // 0: one model, read in file order
  duet::train::Sampling sampling = duet::train::Sampling::shuffle;
  std::size_t jobs = 1;

  // Every settable key except vocab_size, which comes from the vocabulary.
  std::vector<std::pair<std::string, std::string>> to_pairs() const;
  // Throws ParameterError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
};

inline constexpr const char* kSeedVariable = "DUETRANK_SEED";

void apply_seed_variable(Settings& settings, const char* value);

// Flat `key = value` lines; blank lines and `#` comments are ignored.
// Throws FormatError naming file:line, IoError when unreadable.
void apply_config_file(Settings& settings, const std::filesystem::path& path);
void apply_config_text(Settings& settings, std::istream& in, const std::string& source);

void echo(std::ostream& out, const Settings& settings);

}  // namespace duetrank
