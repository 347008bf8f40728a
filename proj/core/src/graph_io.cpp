#include "bgap/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "text_lines.hpp"

namespace bgap {

MultiGraph read_edge_list(std::istream& in) {
  detail::DataLines lines(in);
  std::istringstream header(lines.next("edge list header"));
  long long n = -1;
  long long m = -1;
  if (!(header >> n >> m) || n < 0 || m < 0) {
    throw std::runtime_error("edge list: header must be `n m` with n, m >= 0");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    std::istringstream row(lines.next("edge line"));
    Edge e;
    if (!(row >> e.u >> e.v >> e.multiplicity)) {
      throw std::runtime_error("edge list: line " + std::to_string(lines.line_number()) +
                               " must be `u v mult`");
    }
    edges.push_back(e);
  }
  if (lines.has_more()) {
    throw std::runtime_error("edge list: more edge lines than declared in the header");
  }
  return MultiGraph::build(static_cast<int>(n), edges);
}

void write_edge_list(std::ostream& out, const MultiGraph& g) {
  out << g.num_vertices() << ' ' << g.edges().size() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.multiplicity << '\n';
}

MultiGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_edge_list(in);
}

void save_edge_list(const std::filesystem::path& path, const MultiGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(out, g);
}

}  // namespace bgap
