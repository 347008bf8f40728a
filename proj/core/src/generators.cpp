#include "bgap/generators.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace bgap {

namespace {

struct FamilyInfo {
  Family kind;
  std::string_view name;
  std::size_t arity;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::cycle, "cycle", 1},       {Family::complete, "complete", 1},
    {Family::hamming, "hamming", 1},   {Family::random_regular, "random_regular", 2},
    {Family::margulis, "margulis", 1}, {Family::path, "path", 1},
};

const FamilyInfo& info(Family kind) {
  for (const auto& f : kFamilies) {
    if (f.kind == kind) return f;
  }
  throw std::logic_error("unknown family");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

std::string_view family_name(Family kind) { return info(kind).name; }

std::string FamilySpec::to_string() const {
  std::string out(family_name(kind));
  for (int p : params) out += ":" + std::to_string(p);
  return out;
}

FamilySpec parse_family(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  FamilySpec spec;
  const FamilyInfo* found = nullptr;
  for (const auto& f : kFamilies) {
    if (f.name == parts.front()) found = &f;
  }
  require(found != nullptr, "unknown graph family '" + std::string(parts.front()) + "'");
  spec.kind = found->kind;
  require(parts.size() == found->arity + 1,
          "family '" + std::string(found->name) + "' expects " +
              std::to_string(found->arity) + " parameter(s)");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    int value = 0;
    const auto* first = parts[i].data();
    const auto* last = first + parts[i].size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    require(ec == std::errc{} && ptr == last,
            "bad integer parameter '" + std::string(parts[i]) + "'");
    spec.params.push_back(value);
  }
  return spec;
}

MultiGraph generate(const FamilySpec& spec, std::uint64_t seed) {
  const auto& p = spec.params;
  require(p.size() == info(spec.kind).arity, "wrong number of family parameters");
  switch (spec.kind) {
    case Family::cycle: return cycle_graph(p[0]);
    case Family::complete: return complete_graph(p[0]);
    case Family::hamming: return hamming_cube(p[0]);
    case Family::random_regular: return random_regular_graph(p[0], p[1], seed);
    case Family::margulis: return margulis_graph(p[0]);
    case Family::path: return path_graph(p[0]);
  }
  throw std::logic_error("unreachable");
}

MultiGraph cycle_graph(int n) {
  require(n >= 3, "cycle: need n >= 3");
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n, 1});
  return MultiGraph::build(n, edges);
}

MultiGraph complete_graph(int n) {
  require(n >= 1, "complete: need n >= 1");
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1});
  }
  return MultiGraph::build(n, edges);
}

MultiGraph path_graph(int n) {
  require(n >= 1, "path: need n >= 1");
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1});
  return MultiGraph::build(n, edges);
}

MultiGraph hamming_cube(int n) {
  require(n >= 1 && n <= 20, "hamming: need 1 <= n <= 20");
  const int size = 1 << n;
  std::vector<Edge> edges;
  for (int v = 0; v < size; ++v) {
    for (int bit = 0; bit < n; ++bit) {
      const int w = v ^ (1 << bit);
      if (v < w) edges.push_back({v, w, 1});
    }
  }
  return MultiGraph::build(size, edges);
}

MultiGraph margulis_graph(int n) {
  require(n >= 1, "margulis: need n >= 1");
  const auto index = [n](int x, int y) { return ((x % n) * n) + (y % n); };
  std::vector<Edge> edges;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const int v = index(x, y);
      edges.push_back({v, index(x + y, y), 1});
      edges.push_back({v, index(x, x + y), 1});
      edges.push_back({v, index(x + 1, y), 1});
      edges.push_back({v, index(x, y + 1), 1});
    }
  }
  return MultiGraph::build(n * n, edges);
}

MultiGraph random_regular_graph(int n, int degree, std::uint64_t seed, int max_attempts) {
  require(n >= 1 && degree >= 1, "random_regular: need n >= 1 and d >= 1");
  require(degree < n, "random_regular: need d < n");
  require((static_cast<long long>(n) * degree) % 2 == 0, "random_regular: n*d must be even");

  std::mt19937_64 rng(seed);
  const auto key = [n](int u, int v) {
    return static_cast<long long>(std::min(u, v)) * n + std::max(u, v);
  };

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<int> points;
    points.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(degree));
    for (int v = 0; v < n; ++v) points.insert(points.end(), static_cast<std::size_t>(degree), v);

    std::unordered_set<long long> used;
    std::vector<Edge> edges;
    bool stuck = false;
    while (!points.empty() && !stuck) {
      std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
      std::size_t i = 0;
      std::size_t j = 0;
      bool found = false;
      for (int trial = 0; trial < 64 && !found; ++trial) {
        i = pick(rng);
        j = pick(rng);
        found = points[i] != points[j] && !used.contains(key(points[i], points[j]));
      }
      if (!found) {
        std::vector<std::pair<std::size_t, std::size_t>> suitable;
        for (std::size_t a = 0; a < points.size(); ++a) {
          for (std::size_t b = a + 1; b < points.size(); ++b) {
            if (points[a] != points[b] && !used.contains(key(points[a], points[b]))) {
              suitable.emplace_back(a, b);
            }
          }
        }
        if (suitable.empty()) {
          stuck = true;
          break;
        }
        std::uniform_int_distribution<std::size_t> choose(0, suitable.size() - 1);
        std::tie(i, j) = suitable[choose(rng)];
      }
      const int u = points[i];
      const int v = points[j];
      used.insert(key(u, v));
      edges.push_back({u, v, 1});
      if (i < j) std::swap(i, j);
      points[i] = points.back();
      points.pop_back();
      points[j] = points.back();
      points.pop_back();
    }
    if (stuck) continue;
    auto g = MultiGraph::build(n, edges);
    if (g.connected()) return g;
  }
  throw std::runtime_error("random_regular: no connected draw after " +
                           std::to_string(max_attempts) + " attempts");
}

}  // namespace bgap
