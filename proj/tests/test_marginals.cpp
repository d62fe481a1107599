#include <doctest.h>

#include <cmath>
#include <fstream>

#include "depbounds/errors.hpp"
#include "depbounds/marginals.hpp"
#include "depbounds/rng.hpp"

#include "test_util.hpp"

using namespace depbounds;

TEST_SUITE_BEGIN("marginals");

TEST_CASE("quantile basics") {
  CHECK(MarginalDist::uniform(0, 1).quantile(0.5) == doctest::Approx(0.5));
  CHECK(MarginalDist::uniform(0, 4).quantile(0.25) == doctest::Approx(1.0));
  CHECK(MarginalDist::point_mass(3).quantile(0.9) == doctest::Approx(3.0));
  CHECK_THROWS_AS(MarginalDist::uniform(0, 1).quantile(0.0), DomainError);
  CHECK_THROWS_AS(MarginalDist::uniform(0, 1).quantile(1.0), DomainError);
  CHECK_THROWS_AS(MarginalDist::uniform(0, 1).quantile(-0.2), DomainError);
  CHECK_THROWS_AS(MarginalDist::uniform(2, 2), DomainError);
}

TEST_CASE("quantile is nondecreasing and symmetric around the center") {
  const MarginalDist m = MarginalDist::uniform(-1.5, 4.0);
  const double mu = *m.symmetry_center();
  double prev = m.quantile(1e-6);
  for (int i = 1; i <= 200; ++i) {
    const double u = i / 201.0;
    const double q = m.quantile(u);
    CHECK(q >= prev);
    prev = q;
    CHECK(m.quantile(u) + m.quantile(1.0 - u) == doctest::Approx(2 * mu));
  }
}

TEST_CASE("empirical quantile is the left-continuous inverse") {
  const MarginalDist m = MarginalDist::empirical({3.0, 1.0, 2.0, 2.0});
  // sorted sample: 1,2,2,3 ; F^-(u) = x_(ceil(4u))
  CHECK(m.quantile(0.1) == 1.0);
  CHECK(m.quantile(0.25) == 1.0);
  CHECK(m.quantile(0.26) == 2.0);
  CHECK(m.quantile(0.75) == 2.0);
  CHECK(m.quantile(0.76) == 3.0);
  CHECK_THROWS_AS(MarginalDist::empirical({}), DomainError);
}

TEST_CASE("diamond cdf closed values") {
  const MarginalDist u01 = MarginalDist::uniform(0, 1);
  CHECK(diamond_cdf(u01, u01, 0.5) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(diamond_cdf(u01, u01, 0.0) == doctest::Approx(0.0));
  CHECK(diamond_cdf(u01, u01, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(diamond_cdf(u01, u01, -0.1), DomainError);
}

TEST_CASE("diamond cdf matches the |X-Y| sample cdf") {
  struct Case {
    MarginalDist f, g;
  };
  const Case cases[] = {
      {MarginalDist::uniform(0, 1), MarginalDist::uniform(0, 1)},
      {MarginalDist::uniform(0, 4), MarginalDist::uniform(0, 1)},
      {MarginalDist::uniform(-1, 1), MarginalDist::point_mass(0.25)},
      {MarginalDist::empirical({0.1, 0.4, 0.9}), MarginalDist::uniform(0, 1)},
  };
  int stream = 0;
  for (const Case& c : cases) {
    Rng rf = Rng::stream(91, 2 * stream);
    Rng rg = Rng::stream(91, 2 * stream + 1);
    ++stream;
    std::vector<double> z(100000);
    for (double& v : z) {
      v = std::abs(c.f.quantile_unchecked(rf.uniform()) -
                   c.g.quantile_unchecked(rg.uniform()));
    }
    const double d = test_util::ks_distance(
        z, [&](double x) { return diamond_cdf(c.f, c.g, x); });
    CHECK(d < 0.01);
  }
}

TEST_CASE("diamond quantile inverts the cdf") {
  const MarginalDist u01 = MarginalDist::uniform(0, 1);
  // invert 2z - z^2 = u by hand as the oracle
  for (double u : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    const double oracle = 1.0 - std::sqrt(1.0 - u);
    CHECK(diamond_quantile(u01, u01, u) == doctest::Approx(oracle).epsilon(1e-10));
  }
  CHECK(diamond_quantile(u01, u01, 0.75) == doctest::Approx(0.5));
  CHECK(diamond_quantile(u01, u01, 1e-12) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(diamond_quantile(MarginalDist::point_mass(0), u01, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(diamond_quantile(u01, u01, 1.5), DomainError);

  // generalized inverse property cdf(quantile(u)) >= u on mixed families
  const DiamondDist dia(MarginalDist::uniform(0, 2),
                        MarginalDist::empirical({0.3, 0.7, 1.9}));
  for (int i = 1; i < 40; ++i) {
    const double u = i / 40.0;
    CHECK(dia.cdf(dia.quantile(u)) >= u - 1e-9);
  }
}

TEST_CASE("gini mean difference closed values") {
  const MarginalDist u01 = MarginalDist::uniform(0, 1);
  CHECK(gini_m(u01, u01, 1.0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(gini_m(u01, u01, 2.0) == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(gini_m(u01, u01, 0.5) == doctest::Approx(8.0 / 15).epsilon(1e-12));
  CHECK_THROWS_AS(gini_m(u01, u01, 0.0), DomainError);
  CHECK_THROWS_AS(gini_m(u01, u01, 2.5), DomainError);
}

TEST_CASE("gini of uniform(a,b) against itself is (b-a)/3") {
  const double ab[3][2] = {{0, 1}, {-2, 5}, {0.25, 0.75}};
  for (const auto& p : ab) {
    const MarginalDist m = MarginalDist::uniform(p[0], p[1]);
    CHECK(gini_m(m, m, 1.0) ==
          doctest::Approx((p[1] - p[0]) / 3).epsilon(1e-12));
  }
}

TEST_CASE("gini symmetry and agreement with the quadrature route") {
  const MarginalDist a = MarginalDist::uniform(0, 4);
  const MarginalDist b = MarginalDist::uniform(-1, 1);
  const MarginalDist c = MarginalDist::empirical({0.0, 0.5, 2.0});
  for (double beta : {0.5, 1.0, 1.7}) {
    CHECK(gini_m(a, b, beta) == doctest::Approx(gini_m(b, a, beta)));
    CHECK(gini_m(a, c, beta) == doctest::Approx(gini_m(c, a, beta)));
    // independent route: integrate the diamond quantile
    CHECK(gini_m_quadrature(a, b, beta) ==
          doctest::Approx(gini_m(a, b, beta)).epsilon(1e-7));
    CHECK(gini_m_quadrature(a, c, beta) ==
          doctest::Approx(gini_m(a, c, beta)).epsilon(1e-7));
  }
  // brute-force Simpson oracle on the density side for uniform x uniform
  const double oracle = test_util::simpson2d(
      [](double x, double y) { return std::abs(x - y); }, 0, 4, -1, 1, 400,
      400) / (4.0 * 2.0);
  CHECK(gini_m(a, b, 1.0) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("m2_cross moment arithmetic") {
  const MarginalDist u01 = MarginalDist::uniform(0, 1);
  const MarginalDist u04 = MarginalDist::uniform(0, 4);
  CHECK(m2_cross(u01, u01) == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(m2_cross(MarginalDist::point_mass(2), MarginalDist::point_mass(2)) ==
        doctest::Approx(0.0));
  CHECK(m2_cross(u04, u01) == doctest::Approx(11.0 / 3).epsilon(1e-12));
  CHECK_THROWS_AS(m2_cross(MarginalDist::empirical({1.0}), u01), DomainError);

  // Monte Carlo cross-check of the 11/3 value
  Rng rx = Rng::stream(17, 0);
  Rng ry = Rng::stream(17, 1);
  double sum = 0.0, sum2 = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double v = 4.0 * rx.uniform() - ry.uniform();
    sum += v * v;
    sum2 += v * v * v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 11.0 / 3) < 3 * se);
}

TEST_CASE("deviation cdf is stochastically ordered in the center distance") {
  // for uniform(0,1) and 1/2 <= x < y: P(|X-x| <= t) >= P(|X-y| <= t)
  const MarginalDist u01 = MarginalDist::uniform(0, 1);
  const double xs[] = {0.5, 0.6, 0.75, 0.9, 1.0};
  for (std::size_t i = 0; i + 1 < 5; ++i) {
    for (int k = 1; k <= 20; ++k) {
      const double t = k / 20.0;
      CHECK(diamond_cdf(u01, MarginalDist::point_mass(xs[i]), t) >=
            diamond_cdf(u01, MarginalDist::point_mass(xs[i + 1]), t) - 1e-12);
    }
  }
}

TEST_CASE("marginal spec parsing") {
  const MarginalDist u = parse_marginal("uniform:0,4");
  CHECK(u.family() == MarginalFamily::Uniform);
  CHECK(u.hi() == 4.0);
  CHECK(parse_marginal("point:2.5").quantile(0.1) == 2.5);
  {
    std::ofstream f("/tmp/depbounds_test_sample.txt");
    f << "0.5\n0.25\n0.9\n";
  }
  const MarginalDist e = parse_marginal("empirical:/tmp/depbounds_test_sample.txt");
  CHECK(e.sample_points().size() == 3);
  CHECK(e.quantile(0.2) == 0.25);
  CHECK_THROWS_AS(parse_marginal("gamma:1,2"), DomainError);
  CHECK_THROWS_AS(parse_marginal("uniform:1"), DomainError);
  CHECK_THROWS_AS(parse_marginal("empirical:/nonexistent/file"), DomainError);
}

TEST_SUITE_END();
