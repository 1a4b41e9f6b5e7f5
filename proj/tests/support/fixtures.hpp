#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spanmdp/generators.hpp"
#include "spanmdp/mdp.hpp"

namespace spanmdp::fixtures {

/// P(1|0)=1, P(0|1)=1, r=(0,1); one action.
inline Mdp two_state_cycle() { return Mdp(2, 1, {0, 1, 1, 0}, {0, 1}); }

inline Mdp single_self_loop(double r = 0.7) { return Mdp(1, 1, {1.0}, {r}); }

/// One state, two self-loop actions with rewards (0.2, 0.9).
inline Mdp two_armed_loop() { return Mdp(1, 2, {1.0, 1.0}, {0.2, 0.9}); }

/// Two disconnected absorbing states, rewards (0.2, 0.9).
inline Mdp two_self_loops() { return Mdp(2, 1, {1, 0, 0, 1}, {0.2, 0.9}); }

/// State 0: action 0 self-loop, action 1 moves to 1; state 1 absorbing.
inline Mdp two_mec_example() {
  return Mdp(2, 2, {1, 0, 0, 1, 0, 1, 0, 1}, {0.3, 0.0, 0.5, 0.5});
}

/// Deterministic ring 0 -> 1 -> 2 -> 0, one action.
inline Mdp three_state_ring() {
  return Mdp(3, 1, {0, 1, 0, 0, 0, 1, 1, 0, 0}, {0.0, 0.5, 1.0});
}

/// Ring with a second, stochastic "stay or advance" action.
inline Mdp lazy_ring() {
  return Mdp(3, 2,
             {0, 1, 0, 0.5, 0.5, 0,  //
              0, 0, 1, 0, 0.5, 0.5,  //
              1, 0, 0, 0.5, 0, 0.5},
             {0.0, 0.1, 0.4, 0.3, 1.0, 0.6});
}

/// The 5-state slip chain used by the end-to-end checks.
inline Mdp chain_fixture() { return generate_chain(5, 0.2); }

/// Hand fixtures for the audit sweep (all weakly communicating).
inline std::vector<std::pair<std::string, Mdp>> hand_fixtures() {
  return {{"two_state_cycle", two_state_cycle()},
          {"single_self_loop", single_self_loop()},
          {"two_armed_loop", two_armed_loop()},
          {"lazy_ring", lazy_ring()},
          {"chain5", chain_fixture()}};
}

}  // namespace spanmdp::fixtures
