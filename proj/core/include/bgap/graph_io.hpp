#pragma once

#include <filesystem>
#include <iosfwd>

#include "bgap/graph.hpp"

namespace bgap {

// Edge-list text format: a header line `n m`, then m lines `u v mult`.
// Everything after `#` on a line is a comment; blank lines are ignored.

/// Throws std::runtime_error on malformed input and std::invalid_argument if
/// the edges are invalid for build_graph.
MultiGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const MultiGraph& g);

MultiGraph load_edge_list(const std::filesystem::path& path);
void save_edge_list(const std::filesystem::path& path, const MultiGraph& g);

}  // namespace bgap
