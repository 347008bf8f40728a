#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bgap::cli {

inline constexpr int kCriterionCount = 10;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
};

/// Runs one criterion (1..10). Exceptions inside a criterion become a
/// failed result with the message as detail.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts = {});

std::vector<CriterionResult> run_acceptance(std::span<const int> ids,
                                            const AcceptanceOptions& opts = {});

/// `PASS  3  name  (1.23 s)  detail`
std::string format_line(const CriterionResult& r);

}  // namespace bgap::cli
