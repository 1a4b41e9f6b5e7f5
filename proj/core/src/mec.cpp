#include "spanmdp/mec.hpp"

#include <algorithm>

#include "graph.hpp"

namespace spanmdp {

MecDecomposition mec_decomposition(const Mdp& m) {
  const std::size_t S = m.num_states();
  const std::size_t A = m.num_actions();
  std::vector<bool> alive(S, true);
  std::vector<bool> allowed(S * A, true);

  detail::SccResult scc;
  bool changed = true;
  while (changed) {
    changed = false;
    detail::Adjacency adj(S);
    for (StateIndex s = 0; s < S; ++s) {
      if (!alive[s]) continue;
      for (ActionIndex a = 0; a < A; ++a) {
        if (!allowed[s * A + a]) continue;
        const auto row = m.row(s, a);
        for (StateIndex t = 0; t < S; ++t) {
          if (row[t] > 0.0) adj[s].push_back(t);
        }
      }
    }
    scc = detail::strongly_connected_components(adj, alive);

    for (StateIndex s = 0; s < S; ++s) {
      if (!alive[s]) continue;
      bool any = false;
      for (ActionIndex a = 0; a < A; ++a) {
        if (!allowed[s * A + a]) continue;
        const auto row = m.row(s, a);
        bool stays = true;
        for (StateIndex t = 0; t < S && stays; ++t) {
          if (row[t] > 0.0 && (!alive[t] || scc.component[t] != scc.component[s])) stays = false;
        }
        if (!stays) {
          allowed[s * A + a] = false;
          changed = true;
        } else {
          any = true;
        }
      }
      if (!any) {
        alive[s] = false;
        changed = true;
      }
    }
  }

  MecDecomposition out;
  std::vector<std::size_t> slot(scc.count, static_cast<std::size_t>(-1));
  for (StateIndex s = 0; s < S; ++s) {
    if (!alive[s]) {
      out.transient_states.push_back(s);
      continue;
    }
    const std::size_t id = scc.component[s];
    if (slot[id] == static_cast<std::size_t>(-1)) {
      slot[id] = out.components.size();
      out.components.emplace_back();
    }
    EndComponent& ec = out.components[slot[id]];
    ec.states.push_back(s);
    auto& acts = ec.actions.emplace_back();
    for (ActionIndex a = 0; a < A; ++a) {
      if (allowed[s * A + a]) acts.push_back(a);
    }
  }
  return out;
}

bool is_weakly_communicating(const Mdp& m) { return mec_decomposition(m).components.size() == 1; }

}  // namespace spanmdp
