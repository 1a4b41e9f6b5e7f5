#pragma once

#include <vector>

#include "spanmdp/mdp.hpp"

namespace spanmdp {

/// A closed, strongly connected state/action sub-structure.
struct EndComponent {
  std::vector<StateIndex> states;                 // ascending
  std::vector<std::vector<ActionIndex>> actions;  // actions[i] allowed at states[i], ascending
};

struct MecDecomposition {
  std::vector<EndComponent> components;  // ordered by smallest member state
  std::vector<StateIndex> transient_states;
};

/**
 * Maximal end components of the support graph (edge s -> s' via a iff
 * P(s'|s,a) > 0). States outside every component are transient under every
 * stationary policy.
 */
MecDecomposition mec_decomposition(const Mdp& m);

/// True iff the MDP has exactly one maximal end component.
bool is_weakly_communicating(const Mdp& m);

}  // namespace spanmdp
