#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bgap/graph.hpp"

namespace bgap {

enum class Family { cycle, complete, hamming, random_regular, margulis, path };

/// A generator family plus its integer parameters, e.g. `hamming:3` or
/// `random_regular:20:3` (n, degree).
struct FamilySpec {
  Family kind = Family::cycle;
  std::vector<int> params;

  std::string to_string() const;
};

std::string_view family_name(Family kind);

/// Parses `kind:p1[:p2...]`. Throws std::invalid_argument.
FamilySpec parse_family(std::string_view text);

/// Deterministic for a fixed seed (only random_regular consumes the seed).
MultiGraph generate(const FamilySpec& spec, std::uint64_t seed = 0);

MultiGraph cycle_graph(int n);
MultiGraph complete_graph(int n);
MultiGraph path_graph(int n);
/// Cayley graph of (Z/2)^n with the standard generators; vertex i is the
/// bit vector of i.
MultiGraph hamming_cube(int n);
/// 8-regular graph on (Z/n)^2 from (x,y) -> (x+y,y), (x,x+y), (x+1,y),
/// (x,y+1) and their inverses. Vertex (x,y) has index x*n + y.
MultiGraph margulis_graph(int n);
/// Connected simple d-regular graph drawn by the pairing model with
/// suitable-pair selection. Throws std::invalid_argument for infeasible
/// (n, d) and std::runtime_error if no connected draw is found.
MultiGraph random_regular_graph(int n, int degree, std::uint64_t seed,
                                int max_attempts = 200);

}  // namespace bgap
