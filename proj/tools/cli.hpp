#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bgap::cli {

/// Parsed command line shared by all subcommands.
struct RunConfig {
  std::string command;
  std::string gen;         ///< generator spec, e.g. `hamming:3`
  std::string graph_file;  ///< edge-list file
  std::string group;       ///< group spec, e.g. `sl_mod:2:3`
  std::string action_file;
  std::string subgroup;    ///< comma-separated element indices
  double p = 2.0;
  double q = 2.0;
  int d = -1;              ///< -1: the subcommand's default
  int restarts = -1;       ///< -1: the library default
  double tol = 1e-10;
  int max_iter = -1;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out_dir;
  unsigned threads = 0;
};

/// Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace bgap::cli
