#pragma once

#include <vector>

namespace bgap::detail {

/// Maximum bipartite matching by augmenting paths (Kuhn). `adj[u]` lists the
/// right vertices adjacent to left vertex u, tried in the given order; left
/// vertices are processed in increasing index. Returns, for every left vertex,
/// its matched right vertex or -1.
std::vector<int> bipartite_matching(const std::vector<std::vector<int>>& adj, int right_count);

}  // namespace bgap::detail
