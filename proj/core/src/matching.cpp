#include "matching.hpp"

#include <cstddef>

namespace bgap::detail {

namespace {

class Kuhn {
 public:
  Kuhn(const std::vector<std::vector<int>>& adj, int right_count)
      : adj_(adj), match_right_(static_cast<std::size_t>(right_count), -1),
        stamp_(static_cast<std::size_t>(right_count), 0) {}

  bool augment(int u) {
    ++round_;
    return search(u);
  }

  std::vector<int> left_matches() const {
    std::vector<int> out(adj_.size(), -1);
    for (std::size_t r = 0; r < match_right_.size(); ++r) {
      if (match_right_[r] >= 0) out[static_cast<std::size_t>(match_right_[r])] = static_cast<int>(r);
    }
    return out;
  }

 private:
  bool search(int u) {
    for (int r : adj_[static_cast<std::size_t>(u)]) {
      auto& seen = stamp_[static_cast<std::size_t>(r)];
      if (seen == round_) continue;
      seen = round_;
      int& owner = match_right_[static_cast<std::size_t>(r)];
      if (owner < 0 || search(owner)) {
        owner = u;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> match_right_;
  std::vector<long long> stamp_;
  long long round_ = 0;
};

}  // namespace

std::vector<int> bipartite_matching(const std::vector<std::vector<int>>& adj, int right_count) {
  Kuhn kuhn(adj, right_count);
  for (std::size_t u = 0; u < adj.size(); ++u) kuhn.augment(static_cast<int>(u));
  return kuhn.left_matches();
}

}  // namespace bgap::detail
