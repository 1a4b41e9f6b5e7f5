#pragma once

#include <cstddef>
#include <vector>

namespace spanmdp::detail {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct SccResult {
  /// component[v] for every vertex; inactive vertices get kNoComponent.
  std::vector<std::size_t> component;
  std::size_t count = 0;
};

inline constexpr std::size_t kNoComponent = static_cast<std::size_t>(-1);

/// Tarjan's algorithm (iterative). Edges into inactive vertices are ignored.
SccResult strongly_connected_components(const Adjacency& adj, const std::vector<bool>& active);

SccResult strongly_connected_components(const Adjacency& adj);

/// Vertices reachable from `source` (including itself).
std::vector<bool> reachable_from(const Adjacency& adj, std::size_t source);

/// Period of the strongly connected set `members` (gcd of cycle lengths).
std::size_t period_of_class(const Adjacency& adj, const std::vector<std::size_t>& members,
                            const std::vector<std::size_t>& component, std::size_t id);

}  // namespace spanmdp::detail
