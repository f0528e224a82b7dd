#include "duet/train/bagging.hpp"

#include <string>

#include "duet/error.hpp"

namespace duet::train {

std::string_view to_string(Sampling s) { return s == Sampling::shuffle ? "shuffle" : "bootstrap"; }

Sampling parse_sampling(std::string_view text) {
  if (text == "shuffle") return Sampling::shuffle;
  if (text == "bootstrap") return Sampling::bootstrap;
  throw ParameterError("sampling must be 'shuffle' or 'bootstrap', got '" + std::string(text) + "'");
}

BaggingPlan make_bagging_plan(std::size_t num_models, std::uint64_t base_seed, Sampling sampling,
                              std::size_t shuffle_buffer) {
  if (num_models < 1) throw ParameterError("bagging needs at least one model");
  BaggingPlan plan{sampling, shuffle_buffer, {}};
  for (std::size_t k = 0; k < num_models; ++k) plan.members.push_back({k, base_seed + k});
  return plan;
}

std::unique_ptr<TripleSource> member_source(const BaggingPlan& plan, const BagMember& member,
                                            const std::function<std::unique_ptr<TripleSource>()>& open) {
  const std::uint64_t stream_seed = member.seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull;
  auto shuffled = std::make_unique<BlockShuffleSource>(open(), stream_seed, plan.shuffle_buffer);
  if (plan.sampling == Sampling::shuffle) return shuffled;
  return std::make_unique<BootstrapSource>(std::move(shuffled), stream_seed ^ 0xA0761D6478BD642Full);
}

}  // namespace duet::train
