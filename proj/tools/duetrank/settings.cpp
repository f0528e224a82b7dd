#include "settings.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "duet/error.hpp"

namespace duetrank {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::size_t parse_count(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw duet::ParameterError("'" + std::string(key) + "' needs a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw duet::ParameterError("'" + std::string(key) + "' needs a number, got '" + std::string(v) + "'");
  return out;
}

bool parse_switch(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw duet::ParameterError("'" + std::string(key) + "' needs on/off, got '" + std::string(v) + "'");
}

std::string real(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, end);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> Settings::to_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto& kv : model.to_pairs())
    if (kv.first != "vocab_size") out.push_back(std::move(kv));
  out.emplace_back("sigma", real(train.sigma));
  out.emplace_back("lr", real(train.lr));
  out.emplace_back("batch_size", std::to_string(train.batch_size));
  out.emplace_back("minibatches", std::to_string(train.minibatches));
  out.emplace_back("recycle", train.recycle ? "on" : "off");
  out.emplace_back("bagging", std::to_string(bagging));
  out.emplace_back("sampling", std::string(duet::train::to_string(sampling)));
  out.emplace_back("jobs", std::to_string(jobs));
  return out;
}

void Settings::set(std::string_view key, std::string_view value) {
  if (key == "vocab_size") throw duet::ParameterError("vocab_size is taken from the vocabulary");
  if (model.set(key, value)) return;
  if (key == "sigma") {
    train.sigma = parse_real(key, value);
  } else if (key == "lr") {
    train.lr = parse_real(key, value);
  } else if (key == "batch_size") {
    train.batch_size = parse_count(key, value);
  } else if (key == "minibatches") {
    train.minibatches = parse_count(key, value);
  } else if (key == "recycle") {
    train.recycle = parse_switch(key, value);
  } else if (key == "bagging") {
    bagging = parse_count(key, value);
  } else if (key == "sampling") {
    sampling = duet::train::parse_sampling(value);
  } else if (key == "jobs") {
    jobs = parse_count(key, value);
    if (jobs < 1) throw duet::ParameterError("jobs must be at least 1");
  } else {
    throw duet::ParameterError("unknown setting '" + std::string(key) + "'");
  }
}

void apply_seed_variable(Settings& settings, const char* value) {
  if (value == nullptr || *value == '\0') return;
  try {
    settings.set("seed", value);
  } catch (const duet::ParameterError& e) {
    throw duet::ParameterError(std::string(kSeedVariable) + ": " + e.what());
  }
}

void apply_config_text(Settings& settings, std::istream& in, const std::string& source) {
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    const std::string where = source + ":" + std::to_string(n);
    if (eq == std::string_view::npos) throw duet::FormatError(where + ": expected 'key = value'");
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    try {
      settings.set(key, value);
    } catch (const duet::ParameterError& e) {
      throw duet::FormatError(where + ": " + e.what());
    }
  }
}

void apply_config_file(Settings& settings, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw duet::IoError("cannot open config file " + path.string());
  apply_config_text(settings, in, path.string());
}

void echo(std::ostream& out, const Settings& settings) {
  out << "effective config:\n";
  for (const auto& [k, v] : settings.to_pairs()) out << "  " << k << " = " << v << '\n';
}

}  // namespace duetrank
