#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depbounds/functionals.hpp"

namespace depbounds {

enum class Objective { MaxScc, MinScc, MinEs, MaxEs };

std::string objective_name(Objective o);
Objective parse_objective(const std::string& name);

struct SearchProblem {
  Objective objective = Objective::MaxScc;
  double beta = 1.0;
  int d = 2;
  int n = 8;
  std::vector<double> y;  // observation, ES objectives only
  int restarts = 1;
  std::uint64_t seed = 0;
  double improve_tol = 1e-12;  // smaller gains count as no improvement
  int workers = 1;

  void validate() const;
};

struct RestartTrace {
  int restart = 0;
  long long iterations = 0;  // accepted swaps
  double final_value = 0.0;
};

struct SearchResult {
  DiscreteCopula best;
  double best_value = 0.0;
  std::vector<RestartTrace> trace;
  long long swap_evaluations = 0;
};

// Multi-restart first-improvement local search over permutation copulas:
// every pass visits all transpositions sigma_k(i) <-> sigma_k(j) in a
// seed-derived random order, applying each strictly improving one, and a
// restart ends after a pass with no accepted move. Restart 0 starts from the
// identity tuple (the discretized comonotone copula), later restarts from
// random permutations. Deterministic given (seed, restarts).
SearchResult local_search(const SearchProblem& p);

// Exhaustive enumeration over permutation tuples (first coordinate pinned to
// the identity); refuses when (n!)^(d-1) exceeds `limit`.
SearchResult brute_force(const SearchProblem& p, long long limit = 1000000);

enum class HatStatus { Separated, Inconclusive };

// Monte Carlo comparison of ES(C+, 0) and ES(hat copula, 0) at beta = 1,
// d = 2: the hat copula scores strictly better, with the estimates required
// to differ by more than 3 combined standard errors to count as separated.
struct HatComparison {
  Estimate es_comonotone;
  Estimate es_hat;
  double separation_sigmas = 0.0;
  HatStatus status = HatStatus::Inconclusive;
};

HatComparison verify_hat_counterexample(long long samples, std::uint64_t seed,
                                        int workers = 1);

}  // namespace depbounds
