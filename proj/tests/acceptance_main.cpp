#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "acceptance.hpp"

// acceptance_main [--criterion N]... [--seed S]
int main(int argc, char** argv) {
  std::vector<int> ids;
  bgap::cli::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if ((arg == "--criterion" || arg == "--seed") && i + 1 < argc) {
      const std::string value = argv[++i];
      if (arg == "--seed") {
        opts.seed = std::stoull(value);
        continue;
      }
      const int id = std::stoi(value);
      if (id < 1 || id > bgap::cli::kCriterionCount) {
        std::cerr << "criterion out of range: " << id << "\n";
        return 2;
      }
      ids.push_back(id);
    } else {
      std::cerr << "usage: acceptance_main [--criterion N]... [--seed S]\n";
      return 2;
    }
  }
  if (ids.empty())
    for (int id = 1; id <= bgap::cli::kCriterionCount; ++id) ids.push_back(id);

  bool ok = true;
  for (const auto& r : bgap::cli::run_acceptance(ids, opts)) {
    std::cout << bgap::cli::format_line(r) << "\n";
    ok = ok && r.passed;
  }
  return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
