#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "spanmdp/mdp.hpp"

namespace spanmdp {

/**
 * Seed derivation.
 *
 *   mix64(x)     : splitmix64 finalizer
 *   derive(m, k) : h = mix64(m); for each key k_i: h = mix64(h ^ mix64(k_i + i + 1))
 *
 * Every random stream in the library is std::mt19937_64 seeded with a derived
 * value. The first key is always a purpose tag, so streams for different uses
 * never coincide.
 */
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept;

namespace purpose {
inline constexpr std::uint64_t kTransitions = 0x7472616e73ULL;  // next-state sampling
inline constexpr std::uint64_t kRewardNoise = 0x6e6f697365ULL;  // reward perturbation
inline constexpr std::uint64_t kTrial = 0x747269616cULL;        // experiment trial seeds
inline constexpr std::uint64_t kPolicies = 0x706f6c6963ULL;     // random audit policies
inline constexpr std::uint64_t kGarnet = 0x6761726e6574ULL;     // random instance generation
inline constexpr std::uint64_t kBootstrap = 0x626f6f74ULL;      // bootstrap resampling
}  // namespace purpose

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
double uniform01(std::mt19937_64& engine);

/**
 * Inverse-CDF sampling: the first index whose running cumulative sum strictly
 * exceeds u. If rounding leaves u above the total, the last index with
 * positive probability is returned.
 */
std::size_t sample_index(std::span<const double> probabilities, double u);

/// Oracle over a hidden MDP returning seeded next-state samples.
class GenerativeModel {
 public:
  GenerativeModel(Mdp mdp, std::uint64_t master_seed);

  const Mdp& mdp() const noexcept { return *mdp_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }

  /// Engine for the (trial, s, a) stream, positioned before draw 0.
  std::mt19937_64 stream(StateIndex s, ActionIndex a, std::uint64_t trial) const;

  /// Draw number `draw` of the (trial, s, a) stream.
  StateIndex sample_next_state(StateIndex s, ActionIndex a, std::uint64_t trial,
                               std::uint64_t draw) const;

 private:
  void check_pair(StateIndex s, ActionIndex a) const;

  std::shared_ptr<const Mdp> mdp_;
  std::uint64_t master_seed_;
};

struct EmpiricalModel {
  std::size_t samples_per_pair = 0;
  std::vector<std::uint64_t> counts;  // row-major [s][a][s']
  Mdp p_hat;                          // counts / n, true rewards

  std::uint64_t count(StateIndex s, ActionIndex a, StateIndex next) const {
    return counts[(s * p_hat.num_actions() + a) * p_hat.num_states() + next];
  }
};

/// Draws 0..n-1 of every (trial, s, a) stream and forms P_hat = counts / n.
EmpiricalModel build_empirical_model(const GenerativeModel& g, std::size_t n, std::uint64_t trial);

/// MDP document of p_hat plus "samples_per_pair" and "counts" ([S][A][S] integers).
std::string serialize_empirical_model(const EmpiricalModel& e);
EmpiricalModel parse_empirical_model(std::string_view text);

}  // namespace spanmdp
