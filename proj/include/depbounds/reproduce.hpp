#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace depbounds {

// One verifiable claim: passes iff lo <= got <= hi.
struct CheckRow {
  int criterion = 0;
  std::string name;
  double got = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool pass = false;
  std::string detail;
};

// Runs the whole battery of value reproductions and structural property
// checks (criteria 1-12). Deterministic given the seed.
std::vector<CheckRow> run_reproduction(std::uint64_t seed, int workers = 1);

bool all_pass(const std::vector<CheckRow>& rows);

std::string reproduction_table(const std::vector<CheckRow>& rows);
std::string reproduction_csv(const std::vector<CheckRow>& rows);
std::string reproduction_json(const std::vector<CheckRow>& rows);

// criterion index -> did every row of it pass (indices 1..12)
std::vector<std::pair<int, bool>> per_criterion(
    const std::vector<CheckRow>& rows);

}  // namespace depbounds
