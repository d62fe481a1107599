#include <doctest.h>

#include <cmath>
#include <numbers>

#include "depbounds/bounds.hpp"
#include "depbounds/errors.hpp"
#include "depbounds/optimizer.hpp"

#include "test_util.hpp"

using namespace depbounds;

TEST_SUITE_BEGIN("optimizer");

namespace {

SearchProblem problem(Objective obj, int n, double beta = 1.0,
                      int restarts = 50, std::uint64_t seed = 1) {
  SearchProblem p;
  p.objective = obj;
  p.n = n;
  p.d = 2;
  p.beta = beta;
  p.restarts = restarts;
  p.seed = seed;
  if (obj == Objective::MinEs || obj == Objective::MaxEs) {
    p.y = {0.0, 0.0};
  }
  return p;
}

bool is_identity(const DiscreteCopula& dc) {
  const auto& perms = dc.permutations();
  if (!perms) return false;
  for (const auto& sigma : *perms) {
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (sigma[i] != static_cast<int>(i)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(local_search(problem(Objective::MaxScc, 1)), DomainError);
  SearchProblem bad = problem(Objective::MinEs, 4);
  bad.y = {0.5};  // wrong length
  CHECK_THROWS_AS(local_search(bad), DomainError);
  bad.y = {0.5, 1.5};
  CHECK_THROWS_AS(local_search(bad), DomainError);
  SearchProblem badbeta = problem(Objective::MaxScc, 4);
  badbeta.beta = 2.0;
  CHECK_THROWS_AS(local_search(badbeta), DomainError);
  CHECK_THROWS_AS(parse_objective("ascend"), DomainError);
}

TEST_CASE("n=2 has a two-way tie at sqrt(2)/4") {
  const SearchResult res = local_search(problem(Objective::MaxScc, 2));
  CHECK(res.best_value == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-12));
  const SearchResult bf = brute_force(problem(Objective::MaxScc, 2));
  CHECK(bf.swap_evaluations == 2);
  CHECK(bf.best_value == doctest::Approx(res.best_value));
}

TEST_CASE("local search equals brute force for all small grids") {
  for (double beta : {0.5, 1.0, 1.5}) {
    for (int n = 2; n <= 6; ++n) {
      for (Objective obj : {Objective::MaxScc, Objective::MinScc}) {
        const SearchResult ls = local_search(problem(obj, n, beta));
        const SearchResult bf = brute_force(problem(obj, n, beta));
        CAPTURE(beta);
        CAPTURE(n);
        CHECK(std::abs(ls.best_value - bf.best_value) <= 1e-12);
      }
      const SearchResult mn =
          local_search(problem(Objective::MinScc, n, beta));
      CHECK(is_identity(mn.best));
    }
  }
}

TEST_CASE("monotone acceptance: the final value is never worse than the start") {
  // restart 0 starts from the identity tuple whose value is known
  const SearchProblem p = problem(Objective::MaxScc, 12, 1.0, 6, 99);
  const SearchResult res = local_search(p);
  PermutationState identity_state(
      12, {std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}}, 1.0);
  for (const RestartTrace& t : res.trace) {
    if (t.restart == 0) {
      CHECK(t.final_value >= identity_state.scc_value() - 1e-12);
    }
  }
  CHECK(res.trace.size() == 6);
  CHECK(res.swap_evaluations > 0);
}

TEST_CASE("results are bit-identical across repeated runs and worker counts") {
  SearchProblem p = problem(Objective::MaxScc, 10, 1.0, 8, 123);
  const SearchResult a = local_search(p);
  const SearchResult b = local_search(p);
  CHECK(a.best_value == b.best_value);
  CHECK(a.best == b.best);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].final_value == b.trace[i].final_value);
  }
  p.workers = 4;
  const SearchResult c = local_search(p);
  CHECK(c.best_value == a.best_value);
  CHECK(c.best == a.best);
}

TEST_CASE("brute force refuses oversized spaces") {
  CHECK_THROWS_AS(brute_force(problem(Objective::MaxScc, 12)), DomainError);
  CHECK_NOTHROW(brute_force(problem(Objective::MaxScc, 5)));
}

TEST_CASE("min-es enumeration shows the comonotone copula is not optimal") {
  // grid analogue of the hat-copula effect at y = (0,0): from n = 5 on, a
  // non-identity permutation scores strictly better
  const SearchResult bf = brute_force(problem(Objective::MinEs, 5));
  PermutationState identity_state(5, {std::vector<int>{0, 1, 2, 3, 4}}, 1.0,
                                  {0.0, 0.0});
  const double id_value =
      identity_state.point_value() - 0.5 * identity_state.scc_value();
  CHECK(bf.best_value < id_value - 1e-9);
  CHECK_FALSE(is_identity(bf.best));
  // local search finds the same optimum
  const SearchResult ls = local_search(problem(Objective::MinEs, 5));
  CHECK(ls.best_value == doctest::Approx(bf.best_value).epsilon(1e-12));
}

TEST_CASE("min-es at the center is stable under symmetrization") {
  SearchProblem p = problem(Objective::MinEs, 8, 1.0, 20, 7);
  p.y = {0.5, 0.5};
  const SearchResult res = local_search(p);
  const DiscreteCopula sym = symmetrize(res.best);
  FunctionalParams ep;
  ep.beta = 1.0;
  ep.method = Method::Exact;
  const JointDist best_jd =
      with_uniform_marginals(Copula::discrete(res.best));
  const JointDist sym_jd = with_uniform_marginals(Copula::discrete(sym));
  const double es_best = energy_score(best_jd, p.y, ep).value;
  const double es_sym = energy_score(sym_jd, p.y, ep).value;
  CHECK(es_best == doctest::Approx(res.best_value).epsilon(1e-10));
  CHECK(es_sym <= es_best + 1e-10);
  // proven floor from the analytic bounds
  CHECK(res.best_value >=
        lower_bound_score(2, 1.0) - 0.5 * sharp_upper_scc(2).value - 1e-12);
}

TEST_CASE("max-scc approaches the sharp ceiling on a fine grid") {
  SearchProblem p = problem(Objective::MaxScc, 64, 1.0, 20, 3);
  const SearchResult res = local_search(p);
  CHECK(res.best_value >= 0.515);
  CHECK(res.best_value <= std::numbers::pi / 6 + 1.0 / 64);
}

TEST_CASE("hat counterexample verification") {
  const HatComparison cmp = verify_hat_counterexample(1000000, 1);
  CHECK(std::abs(cmp.es_comonotone.value - std::sqrt(2.0) / 3) <
        3 * cmp.es_comonotone.se);
  CHECK(cmp.es_hat.value < cmp.es_comonotone.value);
  CHECK(cmp.status == HatStatus::Separated);
  CHECK(cmp.separation_sigmas > 3.0);
  // proven floor: score bound minus half the sharp same-copula bound
  CHECK(cmp.es_hat.value >=
        lower_bound_score(2, 1.0) - 0.5 * sharp_upper_scc(2).value);
  // underpowered run reports inconclusive instead of failing
  const HatComparison weak = verify_hat_counterexample(2000, 1);
  CHECK(weak.status == HatStatus::Inconclusive);
}

TEST_SUITE_END();
