#include "graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

namespace spanmdp::detail {

SccResult strongly_connected_components(const Adjacency& adj, const std::vector<bool>& active) {
  const std::size_t n = adj.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  SccResult out;
  out.component.assign(n, kNoComponent);
  std::size_t next_index = 0;

  // (vertex, next edge position)
  std::vector<std::pair<std::size_t, std::size_t>> call;
  for (std::size_t root = 0; root < n; ++root) {
    if (!active[root] || index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adj[v].size()) {
        const std::size_t w = adj[v][pos++];
        if (!active[w]) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component[w] = out.count;
        } while (w != done);
        ++out.count;
      }
    }
  }
  return out;
}

SccResult strongly_connected_components(const Adjacency& adj) {
  return strongly_connected_components(adj, std::vector<bool>(adj.size(), true));
}

std::vector<bool> reachable_from(const Adjacency& adj, std::size_t source) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::size_t> frontier{source};
  seen[source] = true;
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        frontier.push_back(w);
      }
    }
  }
  return seen;
}

std::size_t period_of_class(const Adjacency& adj, const std::vector<std::size_t>& members,
                            const std::vector<std::size_t>& component, std::size_t id) {
  if (members.empty()) return 1;
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(adj.size(), kUnset);
  std::queue<std::size_t> bfs;
  level[members.front()] = 0;
  bfs.push(members.front());
  std::size_t g = 0;
  while (!bfs.empty()) {
    const std::size_t v = bfs.front();
    bfs.pop();
    for (std::size_t w : adj[v]) {
      if (component[w] != id) continue;
      if (level[w] == kUnset) {
        level[w] = level[v] + 1;
        bfs.push(w);
      } else {
        // cycle-length discrepancy: level[v] + 1 - level[w]
        const auto diff = static_cast<long long>(level[v]) + 1 - static_cast<long long>(level[w]);
        g = std::gcd(g, static_cast<std::size_t>(diff < 0 ? -diff : diff));
      }
    }
  }
  return g == 0 ? 1 : g;
}

}  // namespace spanmdp::detail
