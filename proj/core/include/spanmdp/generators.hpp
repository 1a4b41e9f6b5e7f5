#pragma once

#include <cstdint>

#include "spanmdp/mdp.hpp"

namespace spanmdp {

inline constexpr ActionIndex kLeft = 0;
inline constexpr ActionIndex kRight = 1;

/**
 * Birth-death chain on S states with actions LEFT and RIGHT. The intended
 * move happens with probability 1 - p_slip, the opposite move otherwise;
 * moves past either end stay put. Reward 1 in state S-1, 0.05 in state 0,
 * 0 elsewhere, independent of the action. The construction is deterministic;
 * `seed` is accepted for interface uniformity.
 */
Mdp generate_chain(std::size_t num_states, double p_slip, std::uint64_t seed = 0);

/**
 * Random MDP: every (s,a) row is supported on `branching` distinct states
 * drawn uniformly, with exponential weights normalized so the row sums to one;
 * rewards uniform on [0, 1). Attempts are repeated until the result is weakly
 * communicating. Throws GenerationFailed after `max_attempts`.
 */
Mdp generate_garnet(std::size_t num_states, std::size_t num_actions, std::size_t branching,
                    std::uint64_t seed, std::size_t max_attempts = 1000);

}  // namespace spanmdp
