#include <doctest.h>

#include <cmath>
#include <numbers>

#include "depbounds/bounds.hpp"
#include "depbounds/errors.hpp"

#include "test_util.hpp"

using namespace depbounds;

TEST_SUITE_BEGIN("bounds");

namespace {

std::vector<MarginalDist> uniforms(int d) {
  return std::vector<MarginalDist>(d, MarginalDist::uniform(0, 1));
}

FunctionalParams exact_params(double beta) {
  FunctionalParams p;
  p.beta = beta;
  p.method = Method::Exact;
  return p;
}

}  // namespace

TEST_CASE("sphere constants") {
  CHECK(sphere_mean_distance_constant(2) ==
        doctest::Approx(std::numbers::pi / std::sqrt(6.0)).epsilon(1e-15));
  CHECK(sphere_mean_distance_constant(3) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(sphere_mean_distance_constant(4) ==
        doctest::Approx(64.0 / (15.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK_THROWS_AS(sphere_mean_distance_constant(5), DomainError);
}

TEST_CASE("lower bound closed forms") {
  CHECK(lower_bound_s(uniforms(2), uniforms(2), 1.0) ==
        doctest::Approx(std::sqrt(2.0) / 3).epsilon(1e-12));
  CHECK(lower_bound_s(uniforms(3), uniforms(3), 1.0) ==
        doctest::Approx(std::sqrt(3.0) / 3).epsilon(1e-12));
  CHECK_THROWS_AS(lower_bound_s(uniforms(2), uniforms(2), 2.0), DomainError);
  CHECK_THROWS_AS(lower_bound_s(uniforms(2), uniforms(3), 1.0), DomainError);
}

TEST_CASE("lower bound general quadrature path") {
  // mixed marginal sides force the adaptive route; verify it against the
  // closed form in a case where both apply
  const std::vector<MarginalDist> f = {MarginalDist::uniform(0, 1),
                                       MarginalDist::uniform(0, 1)};
  const std::vector<MarginalDist> g = {MarginalDist::uniform(0, 2),
                                       MarginalDist::uniform(0, 1)};
  // oracle: 1-d Simpson over the comonotone arrangement of the quantiles
  const DiamondDist z1(f[0], g[0]);
  const DiamondDist z2(f[1], g[1]);
  const double oracle = test_util::simpson(
      [&](double u) {
        const double a = z1.quantile(u);
        const double b = z2.quantile(u);
        return std::sqrt(a * a + b * b);
      },
      1e-9, 1.0 - 1e-9, 4000);
  CHECK(lower_bound_s(f, g, 1.0) == doctest::Approx(oracle).epsilon(1e-6));

  // counterexample marginals: bound must sit below the attainable value
  const std::vector<MarginalDist> fc = {MarginalDist::uniform(0, 4),
                                        MarginalDist::uniform(0, 1)};
  const std::vector<MarginalDist> gc = {MarginalDist::uniform(0, 1),
                                        MarginalDist::uniform(0, 4)};
  const double v = lower_bound_s(fc, gc, 1.0);
  CHECK(v > 0.0);
  CHECK(v <= 2.48);
  // identical diamond distributions on both coordinates here, so the bound
  // collapses to sqrt(2) * M_1
  CHECK(v == doctest::Approx(std::sqrt(2.0) *
                             gini_m(fc[0], gc[0], 1.0)).epsilon(1e-8));
}

TEST_CASE("upper bound values") {
  CHECK(upper_bound_s(uniforms(2), uniforms(2), 1.0) ==
        doctest::Approx(std::sqrt(1.0 / 3)).epsilon(1e-12));
  CHECK(upper_bound_s(uniforms(6), uniforms(6), 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<MarginalDist> fc = {MarginalDist::uniform(0, 4),
                                        MarginalDist::uniform(0, 1)};
  const std::vector<MarginalDist> gc = {MarginalDist::uniform(0, 1),
                                        MarginalDist::uniform(0, 4)};
  CHECK(upper_bound_s(fc, gc, 1.0) ==
        doctest::Approx(std::sqrt(22.0 / 3)).epsilon(1e-12));
}

TEST_CASE("sharp same-copula upper bound") {
  CHECK(sharp_upper_scc(2).value ==
        doctest::Approx(std::numbers::pi / 6).epsilon(1e-15));
  CHECK(sharp_upper_scc(2).sharp);
  CHECK(sharp_upper_scc(3).value == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(sharp_upper_scc(3).sharp);
  CHECK(sharp_upper_scc(4).value == doctest::Approx(0.784112).epsilon(1e-6));
  CHECK_FALSE(sharp_upper_scc(4).sharp);
  CHECK(sharp_upper_scc(5).value ==
        doctest::Approx(std::sqrt(5.0 / 6)).epsilon(1e-15));
  CHECK_FALSE(sharp_upper_scc(5).sharp);
  CHECK_THROWS_AS(sharp_upper_scc(2, 1.5), CapabilityError);
  CHECK_THROWS_AS(sharp_upper_scc(1), DomainError);

  // the refined constants stay strictly below Jensen
  for (int d : {2, 3, 4}) {
    CHECK(sharp_upper_scc(d).value < std::sqrt(d / 6.0));
  }
}

TEST_CASE("score lower bound closed form") {
  CHECK(lower_bound_score(2, 1.0) ==
        doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-15));
  CHECK(lower_bound_score(1, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(lower_bound_score(3, 1.0) ==
        doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-15));
  CHECK_THROWS_AS(lower_bound_score(0, 1.0), DomainError);
  CHECK_THROWS_AS(lower_bound_score(2, 2.0), DomainError);
}

TEST_CASE("report assembly for the standard uniform case") {
  const BoundsReport rep = bounds_report(uniforms(2), uniforms(2), 1.0);
  REQUIRE(rep.lower.size() == 1);
  REQUIRE(rep.upper.size() == 2);
  CHECK(rep.lower[0].value == doctest::Approx(0.471405).epsilon(1e-6));
  CHECK(rep.lower[0].sharp);
  CHECK(rep.upper[0].value == doctest::Approx(0.577350).epsilon(1e-6));
  CHECK(rep.upper[1].value == doctest::Approx(0.523599).epsilon(1e-6));
  CHECK(rep.upper[1].sharp);
  CHECK(rep.bounds_consistent());
  CHECK(rep.estimate_bracketed());

  // beta != 1 leaves only the Jensen upper bound
  const BoundsReport rep15 = bounds_report(uniforms(2), uniforms(2), 1.5);
  CHECK(rep15.upper.size() == 1);
}

TEST_CASE("report brackets attached estimates") {
  // S(C||,C||) sits inside the bounds
  Estimate par;
  par.value = 0.4985;
  par.se = 0.0;
  par.method = Method::Quadrature;
  const BoundsReport rep =
      bounds_report(uniforms(2), uniforms(2), 1.0, par);
  CHECK(rep.estimate_bracketed());

  // the spherical value attains the sharp bound within noise
  Estimate sph;
  sph.value = 0.52366;
  sph.se = 0.00025;
  sph.method = Method::MonteCarlo;
  CHECK(bounds_report(uniforms(2), uniforms(2), 1.0, sph)
            .estimate_bracketed());

  // an estimate far above every upper bound is flagged
  Estimate bad;
  bad.value = 0.80;
  bad.se = 0.001;
  bad.method = Method::MonteCarlo;
  CHECK_FALSE(bounds_report(uniforms(2), uniforms(2), 1.0, bad)
                  .estimate_bracketed());
}

TEST_CASE("bounds bracket exact values of random discrete copulas") {
  Rng rng(6000);
  const double betas[3] = {0.5, 1.0, 1.5};
  const int n = 32;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 2;
    const double beta = betas[trial % 3];
    std::vector<std::vector<int>> perms;
    for (int k = 0; k < d - 1; ++k) {
      perms.push_back(test_util::random_permutation(n, rng));
    }
    const JointDist jd = with_uniform_marginals(
        Copula::discrete(DiscreteCopula::from_permutations(n, perms)));
    const double value = s_beta(jd, jd, exact_params(beta)).value;
    const double lower = lower_bound_s(jd.marginals, jd.marginals, beta);
    double upper = upper_bound_s(jd.marginals, jd.marginals, beta);
    if (beta == 1.0) upper = std::min(upper, sharp_upper_scc(d).value);
    CHECK(lower <= value);
    CHECK(value <= upper + 1.0 / (2 * n));
  }
}

TEST_CASE("score bound holds for random copulas and observations") {
  Rng rng(6100);
  const double betas[3] = {0.5, 1.0, 1.5};
  for (int trial = 0; trial < 50; ++trial) {
    const double beta = betas[trial % 3];
    const int d = 2 + trial % 2;
    std::vector<std::vector<int>> perms;
    for (int k = 0; k < d - 1; ++k) {
      perms.push_back(test_util::random_permutation(16, rng));
    }
    const JointDist jd = with_uniform_marginals(
        Copula::discrete(DiscreteCopula::from_permutations(16, perms)));
    std::vector<double> y(d);
    for (double& v : y) v = rng.uniform();
    const double value = s_beta_point(jd, y, exact_params(beta)).value;
    CHECK(value >= lower_bound_score(d, beta) - 1e-12);
  }
}

TEST_CASE("lower bound is the large-n limit of the discretized comonotone") {
  const int n = 256;
  FunctionalParams p = exact_params(1.0);
  for (int d : {2, 3}) {
    const JointDist disc = with_uniform_marginals(
        Copula::discrete(discretize(Copula::comonotone(d), n)));
    const double discrete_value = s_beta(disc, disc, p).value;
    const double bound = lower_bound_s(uniforms(d), uniforms(d), 1.0);
    CHECK(std::abs(discrete_value - bound) < 2.0 / n);
  }
}

TEST_SUITE_END();
