#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spanmdp {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

/// Real vector indexed by state: values, biases, gains, variances.
using ValueVector = std::vector<double>;

/// Maximum deviation of a transition row sum from one.
inline constexpr double kRowSumTolerance = 1e-12;

/**
 * Finite tabular MDP with a dense transition tensor P[s][a][s'] and reward
 * matrix r[s][a], both stored row-major.
 *
 * The constructor only checks shapes. Use validate_mdp() to enforce the
 * stochasticity and range invariants; loaders and generators always do.
 * Internal planning models (e.g. the perturbed empirical model, whose rewards
 * lie in [0, 1 + xi]) are built through with_rewards() and are not
 * re-validated.
 */
class Mdp {
 public:
  Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transitions,
      std::vector<double> rewards);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }

  double transition(StateIndex s, ActionIndex a, StateIndex next) const {
    return transitions_[(s * num_actions_ + a) * num_states_ + next];
  }
  std::span<const double> row(StateIndex s, ActionIndex a) const {
    return {transitions_.data() + (s * num_actions_ + a) * num_states_, num_states_};
  }
  double reward(StateIndex s, ActionIndex a) const { return rewards_[s * num_actions_ + a]; }

  const std::vector<double>& transitions() const noexcept { return transitions_; }
  const std::vector<double>& rewards() const noexcept { return rewards_; }

  /// Same kernel, different reward matrix (row-major [s][a]).
  Mdp with_rewards(std::vector<double> rewards) const;

  bool operator==(const Mdp&) const = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
};

/// Throws RowNotStochastic or ValueOutOfRange when an invariant fails.
void validate_mdp(const Mdp& m);

/// Deterministic stationary policy.
struct Policy {
  std::vector<ActionIndex> actions;

  std::size_t size() const noexcept { return actions.size(); }
  ActionIndex operator[](StateIndex s) const { return actions[s]; }
  bool operator==(const Policy&) const = default;
};

/// Throws IndexOutOfRange if the policy does not fit the MDP.
void validate_policy(const Mdp& m, const Policy& pi);

/// max(v) - min(v). Throws EmptyVector.
double span(std::span<const double> v);

double sup_norm(std::span<const double> v);

/// Number of deterministic policies A^S, saturated at UINT64_MAX.
std::uint64_t policy_count(const Mdp& m);

/**
 * Calls fn(policy) for every deterministic policy in lexicographic order
 * (state 0 varies slowest). Throws EnumerationTooLarge when A^S > cap.
 */
template <typename Fn>
void for_each_policy(const Mdp& m, std::uint64_t cap, Fn&& fn);

void check_enumeration(const Mdp& m, std::uint64_t cap);

template <typename Fn>
void for_each_policy(const Mdp& m, std::uint64_t cap, Fn&& fn) {
  check_enumeration(m, cap);
  const std::size_t S = m.num_states();
  const std::size_t A = m.num_actions();
  Policy pi{std::vector<ActionIndex>(S, 0)};
  while (true) {
    fn(static_cast<const Policy&>(pi));
    std::size_t pos = S;
    do {
      if (pos == 0) return;
      --pos;
      if (++pi.actions[pos] < A) break;
      pi.actions[pos] = 0;
    } while (true);
  }
}

}  // namespace spanmdp
