#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "duet/train/triples.hpp"

namespace duet::train {

inline constexpr std::size_t kDefaultBagSize = 8;

enum class Sampling { shuffle, bootstrap };
std::string_view to_string(Sampling s);
Sampling parse_sampling(std::string_view text);  // throws ParameterError

struct BagMember {
  std::size_t index = 0;
  std::uint64_t seed = 0;  // model init, dropout and sampling
};

struct BaggingPlan {
  Sampling sampling = Sampling::shuffle;
  std::size_t shuffle_buffer = kShuffleBuffer;
  std::vector<BagMember> members;
};

// Member k gets seed base_seed + k. Throws ParameterError for num_models < 1.
BaggingPlan make_bagging_plan(std::size_t num_models, std::uint64_t base_seed,
                              Sampling sampling = Sampling::shuffle,
                              std::size_t shuffle_buffer = kShuffleBuffer);

// This member's private view of the stream produced by `open`: a seeded
// block shuffle, followed by Poisson resampling under bootstrap.
std::unique_ptr<TripleSource> member_source(const BaggingPlan& plan, const BagMember& member,
                                            const std::function<std::unique_ptr<TripleSource>()>& open);

}  // namespace duet::train
