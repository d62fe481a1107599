#include "depbounds/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "depbounds/errors.hpp"
#include "depbounds/rng.hpp"

namespace depbounds {

namespace {

bool is_es_objective(Objective o) {
  return o == Objective::MinEs || o == Objective::MaxEs;
}

// sign such that "larger signed value" always means "better"
double objective_sign(Objective o) {
  return (o == Objective::MaxScc || o == Objective::MaxEs) ? 1.0 : -1.0;
}

double state_value(const PermutationState& st, Objective o) {
  if (is_es_objective(o)) return st.point_value() - 0.5 * st.scc_value();
  return st.scc_value();
}

double state_delta(const PermutationState& st, Objective o, int k, int i,
                   int j) {
  if (is_es_objective(o)) {
    return st.point_delta(k, i, j) - 0.5 * st.scc_delta(k, i, j);
  }
  return st.scc_delta(k, i, j);
}

struct Swap {
  int k, i, j;
};

struct RestartOutcome {
  std::vector<std::vector<int>> perms;
  double value = 0.0;
  long long iterations = 0;
  long long evaluations = 0;
};

RestartOutcome run_restart(const SearchProblem& p, int restart) {
  Rng rng = Rng::stream(p.seed, static_cast<std::uint64_t>(restart));
  std::vector<int> identity(p.n);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<int>> perms(p.d - 1, identity);
  if (restart != 0) {
    for (auto& sigma : perms) rng.shuffle(sigma);
  }

  PermutationState st =
      is_es_objective(p.objective)
          ? PermutationState(p.n, perms, p.beta, p.y)
          : PermutationState(p.n, perms, p.beta);

  std::vector<Swap> candidates;
  candidates.reserve(static_cast<std::size_t>(p.d - 1) * p.n * (p.n - 1) / 2);
  for (int k = 0; k < p.d - 1; ++k) {
    for (int i = 0; i < p.n; ++i) {
      for (int j = i + 1; j < p.n; ++j) candidates.push_back({k, i, j});
    }
  }

  const double sign = objective_sign(p.objective);
  RestartOutcome out;
  bool improved = true;
  while (improved) {
    improved = false;
    rng.shuffle(candidates);
    for (const Swap& s : candidates) {
      ++out.evaluations;
      const double gain = sign * state_delta(st, p.objective, s.k, s.i, s.j);
      if (gain > p.improve_tol) {
        st.apply_swap(s.k, s.i, s.j);
        ++out.iterations;
        improved = true;
      }
    }
  }

  // guard against incremental drift: the reported value is recomputed
  PermutationState fresh =
      is_es_objective(p.objective)
          ? PermutationState(p.n, st.permutations(), p.beta, p.y)
          : PermutationState(p.n, st.permutations(), p.beta);
  const double exact = state_value(fresh, p.objective);
  if (std::abs(exact - state_value(st, p.objective)) > 1e-10) {
    throw IntegrityError("incremental objective drifted beyond 1e-10");
  }
  out.perms = st.permutations();
  out.value = exact;
  return out;
}

}  // namespace

std::string objective_name(Objective o) {
  switch (o) {
    case Objective::MaxScc: return "max-scc";
    case Objective::MinScc: return "min-scc";
    case Objective::MinEs: return "min-es";
    case Objective::MaxEs: return "max-es";
  }
  return "?";
}

Objective parse_objective(const std::string& name) {
  if (name == "max-scc") return Objective::MaxScc;
  if (name == "min-scc") return Objective::MinScc;
  if (name == "min-es") return Objective::MinEs;
  if (name == "max-es") return Objective::MaxEs;
  throw DomainError("unknown objective '" + name +
                    "' (expected max-scc | min-scc | min-es | max-es)");
}

void SearchProblem::validate() const {
  if (n < 2) throw DomainError("grid order must be >= 2");
  if (d < 2) throw DomainError("search dimension must be >= 2");
  if (!(beta > 0.0 && beta < 2.0)) {
    throw DomainError("beta must lie in (0,2)");
  }
  if (restarts < 1) throw DomainError("restart count must be >= 1");
  if (workers < 1) throw DomainError("worker count must be >= 1");
  if (is_es_objective(objective)) {
    if (static_cast<int>(y.size()) != d) {
      throw DomainError("ES objectives need an observation y of length d");
    }
    for (double v : y) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw DomainError("observation must lie in [0,1]^d");
      }
    }
  }
}

SearchResult local_search(const SearchProblem& p) {
  p.validate();
  std::vector<RestartOutcome> outcomes(p.restarts);
  auto run_block = [&](int w) {
    for (int r = w; r < p.restarts; r += p.workers) {
      outcomes[r] = run_restart(p, r);
    }
  };
  if (p.workers == 1) {
    run_block(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(p.workers);
    for (int w = 0; w < p.workers; ++w) threads.emplace_back(run_block, w);
    for (auto& t : threads) t.join();
  }

  const double sign = objective_sign(p.objective);
  int best = 0;
  SearchResult res{DiscreteCopula::from_permutations(p.n, outcomes[0].perms),
                   0.0,
                   {},
                   0};
  res.trace.reserve(p.restarts);
  for (int r = 0; r < p.restarts; ++r) {
    res.swap_evaluations += outcomes[r].evaluations;
    res.trace.push_back({r, outcomes[r].iterations, outcomes[r].value});
    if (sign * outcomes[r].value > sign * outcomes[best].value) best = r;
  }
  res.best = DiscreteCopula::from_permutations(p.n, outcomes[best].perms);
  res.best_value = outcomes[best].value;
  return res;
}

SearchResult brute_force(const SearchProblem& p, long long limit) {
  p.validate();
  double space = 1.0;
  for (int k = 0; k < p.d - 1; ++k) {
    for (int i = 2; i <= p.n; ++i) space *= i;
  }
  if (space > static_cast<double>(limit)) {
    throw DomainError("search space (n!)^(d-1) = " + std::to_string(space) +
                      " exceeds limit " + std::to_string(limit) +
                      "; raise the limit to enumerate");
  }

  std::vector<int> identity(p.n);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<int>> perms(p.d - 1, identity);

  const double sign = objective_sign(p.objective);
  bool have_best = false;
  double best_value = 0.0;
  std::vector<std::vector<int>> best_perms;
  long long evaluated = 0;

  // odometer over lexicographic permutations per free coordinate
  while (true) {
    PermutationState st = is_es_objective(p.objective)
                              ? PermutationState(p.n, perms, p.beta, p.y)
                              : PermutationState(p.n, perms, p.beta);
    const double value = state_value(st, p.objective);
    ++evaluated;
    if (!have_best || sign * value > sign * best_value) {
      have_best = true;
      best_value = value;
      best_perms = perms;
    }
    int k = p.d - 2;
    while (k >= 0 && !std::next_permutation(perms[k].begin(), perms[k].end())) {
      --k;  // rolled over to identity; advance the next coordinate
    }
    if (k < 0) break;
  }

  SearchResult res{DiscreteCopula::from_permutations(p.n, best_perms), 0.0,
                   {},
                   0};
  res.best_value = best_value;
  res.trace.push_back({0, evaluated, best_value});
  res.swap_evaluations = evaluated;
  return res;
}

HatComparison verify_hat_counterexample(long long samples, std::uint64_t seed,
                                        int workers) {
  FunctionalParams params;
  params.beta = 1.0;
  params.method = Method::MonteCarlo;
  params.samples = samples;
  params.workers = workers;

  const std::vector<double> origin{0.0, 0.0};
  HatComparison cmp;
  params.seed = stream_seed(seed, 1);
  cmp.es_comonotone =
      energy_score(with_uniform_marginals(Copula::comonotone(2)), origin,
                   params);
  params.seed = stream_seed(seed, 2);
  cmp.es_hat =
      energy_score(with_uniform_marginals(Copula::hat()), origin, params);

  const double gap = cmp.es_comonotone.value - cmp.es_hat.value;
  const double se = std::sqrt(cmp.es_comonotone.se * cmp.es_comonotone.se +
                              cmp.es_hat.se * cmp.es_hat.se);
  cmp.separation_sigmas = se > 0.0 ? gap / se : 0.0;
  cmp.status = cmp.separation_sigmas > 3.0 ? HatStatus::Separated
                                           : HatStatus::Inconclusive;
  return cmp;
}

}  // namespace depbounds
