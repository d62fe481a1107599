#include "depbounds/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "depbounds/bounds.hpp"
#include "depbounds/copulas.hpp"
#include "depbounds/functionals.hpp"
#include "depbounds/optimizer.hpp"
#include "depbounds/rng.hpp"
#include "depbounds/serialize.hpp"

namespace depbounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Battery {
  std::uint64_t seed;
  int workers;
  std::vector<CheckRow> rows;

  void add(int criterion, std::string name, double got, double lo, double hi,
           std::string detail = "") {
    CheckRow r;
    r.criterion = criterion;
    r.name = std::move(name);
    r.got = got;
    r.lo = lo;
    r.hi = hi;
    r.pass = got >= lo && got <= hi;
    r.detail = std::move(detail);
    rows.push_back(std::move(r));
  }

  std::uint64_t sub(std::uint64_t idx) const { return stream_seed(seed, idx); }
};

FunctionalParams quad_params(double beta = 1.0) {
  FunctionalParams p;
  p.beta = beta;
  p.method = Method::Quadrature;
  return p;
}

FunctionalParams exact_params(double beta = 1.0) {
  FunctionalParams p;
  p.beta = beta;
  p.method = Method::Exact;
  return p;
}

FunctionalParams mc_params(long long samples, std::uint64_t seed,
                           int workers) {
  FunctionalParams p;
  p.method = Method::MonteCarlo;
  p.samples = samples;
  p.seed = seed;
  p.workers = workers;
  return p;
}

std::vector<std::vector<int>> random_perms(int n, int d, Rng& rng) {
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  std::vector<std::vector<int>> perms(d - 1, identity);
  for (auto& sigma : perms) rng.shuffle(sigma);
  return perms;
}

JointDist random_perm_joint(int n, int d, Rng& rng) {
  return with_uniform_marginals(
      Copula::discrete(DiscreteCopula::from_permutations(n, random_perms(n, d, rng))));
}

double exact_scc(const JointDist& jd, double beta) {
  return s_beta(jd, jd, exact_params(beta)).value;
}

// E ||X-Y||^2 over atoms; the beta = 2 moment that score-level calls reject.
double squared_moment(const JointDist& f, const JointDist& g) {
  const auto af = atoms_of(f);
  const auto ag = atoms_of(g);
  double total = 0.0;
  for (const auto& [p, wp] : af) {
    double row = 0.0;
    for (const auto& [q, wq] : ag) {
      double s2 = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double e = p[k] - q[k];
        s2 += e * e;
      }
      row += wq * s2;
    }
    total += wp * row;
  }
  return total;
}

// ---------------------------------------------------------------------------

void criterion_1(Battery& b) {
  for (int d = 1; d <= 3; ++d) {
    const double target = std::sqrt(static_cast<double>(d)) / 3.0;
    const JointDist disc = with_uniform_marginals(
        Copula::discrete(discretize(Copula::comonotone(d), 512)));
    const double exact = s_beta(disc, disc, exact_params()).value;
    b.add(1, "S(C+,C+) exact n=512 d=" + std::to_string(d),
          std::abs(exact - target), 0.0, 2.0 / 512,
          "|got - sqrt(d)/3| < 2/512");
    const JointDist cont = with_uniform_marginals(Copula::comonotone(d));
    const double quad = s_beta(cont, cont, quad_params()).value;
    b.add(1, "S(C+,C+) quadrature d=" + std::to_string(d),
          std::abs(quad - target), 0.0, 1e-10, "|got - sqrt(d)/3| <= 1e-10");
  }
}

void criterion_2(Battery& b) {
  const JointDist cm = with_uniform_marginals(Copula::countermonotone());
  const JointDist cp = with_uniform_marginals(Copula::comonotone(2));
  const double got = s_beta(cm, cp, quad_params()).value;
  const double target = (std::sqrt(2.0) + std::log(1.0 + std::sqrt(2.0))) /
                        (3.0 * std::sqrt(2.0));
  b.add(2, "S(C-,C+) quadrature", std::abs(got - target), 0.0, 1e-8,
        "|got - (sqrt2+log(1+sqrt2))/(3 sqrt2)| <= 1e-8");
}

void criterion_3(Battery& b) {
  const JointDist cp = with_uniform_marginals(Copula::comonotone(2));
  const JointDist cm = with_uniform_marginals(Copula::countermonotone());
  const JointDist par = with_uniform_marginals(Copula::parallel());
  const double s_cp_par = s_beta(cp, par, quad_params()).value;
  const double s_cm_cp = s_beta(cm, cp, quad_params()).value;
  b.add(3, "S(C+,C||) quadrature", s_cp_par, 0.5485, 0.5495, "within window");
  b.add(3, "S(C+,C||) > S(C-,C+)", s_cp_par - s_cm_cp, 1e-6, kInf,
        "strictly larger");
}

void criterion_4(Battery& b) {
  const JointDist par = with_uniform_marginals(Copula::parallel());
  b.add(4, "S(C||,C||) quadrature", s_beta(par, par, quad_params()).value,
        0.4975, 0.4995, "within window");
  {
    const JointDist sph = with_uniform_marginals(Copula::spherical(2));
    const Estimate e =
        s_beta(sph, sph, mc_params(1000000, b.sub(41), b.workers));
    b.add(4, "S(Co,Co) d=2 mc 1e6",
          (e.value - std::numbers::pi / 6.0) / e.se, -3.0, 3.0,
          "within 3 SE of pi/6");
  }
  {
    const JointDist sph = with_uniform_marginals(Copula::spherical(3));
    const Estimate e =
        s_beta(sph, sph, mc_params(1000000, b.sub(42), b.workers));
    b.add(4, "S(Co,Co) d=3 mc 1e6", (e.value - 2.0 / 3.0) / e.se, -3.0, 3.0,
          "within 3 SE of 2/3");
  }
}

void criterion_5(Battery& b) {
  const JointDist cp = with_uniform_marginals(Copula::comonotone(2));
  const JointDist cm = with_uniform_marginals(Copula::countermonotone());
  const JointDist par = with_uniform_marginals(Copula::parallel());
  const double e_cm_cp = energy_distance(cm, cp, quad_params()).value;
  const double e_cp_par = energy_distance(cp, par, quad_params()).value;
  b.add(5, "E(C-,C+) quadrature", e_cm_cp, 0.067, 0.071, "within window");
  b.add(5, "E(C+,C||) quadrature", e_cp_par, 0.062, 0.066, "within window");
  b.add(5, "E(C-,C+) > E(C+,C||)", e_cm_cp - e_cp_par, 1e-6, kInf,
        "ordering reverses relative to the raw distances");
}

void criterion_6(Battery& b) {
  const std::vector<MarginalDist> fm = {MarginalDist::uniform(0, 4),
                                        MarginalDist::uniform(0, 1)};
  const std::vector<MarginalDist> gm = {MarginalDist::uniform(0, 1),
                                        MarginalDist::uniform(0, 4)};
  const JointDist f_minus(Copula::countermonotone(), fm);
  const JointDist f_plus(Copula::comonotone(2), fm);
  const JointDist g_plus(Copula::comonotone(2), gm);
  const Estimate lo =
      s_beta(f_minus, g_plus, mc_params(1000000, b.sub(61), b.workers));
  const Estimate hi =
      s_beta(f_plus, g_plus, mc_params(1000000, b.sub(62), b.workers));
  b.add(6, "S(F-,G+) mc 1e6", lo.value, 2.46, 2.50, "within window");
  b.add(6, "S(F+,G+) mc 1e6", hi.value, 2.53, 2.57, "within window");
  const double sep = (hi.value - lo.value) /
                     std::sqrt(lo.se * lo.se + hi.se * hi.se);
  b.add(6, "S(F-,G+) < S(F+,G+) separation", sep, 3.0, kInf,
        "at least 3 combined SE");
}

void criterion_7(Battery& b) {
  Rng rng(b.sub(70));
  const double betas[3] = {0.5, 1.0, 1.5};
  const int n = 32;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 2;
    const double beta = betas[trial % 3];
    const JointDist jd = random_perm_joint(n, d, rng);
    const double value = exact_scc(jd, beta);
    const double lower = lower_bound_s(jd.marginals, jd.marginals, beta);
    double upper = upper_bound_s(jd.marginals, jd.marginals, beta);
    if (beta == 1.0) upper = std::min(upper, sharp_upper_scc(d).value);
    if (!(lower <= value && value <= upper + 1.0 / (2 * n))) ++violations;
  }
  b.add(7, "bound bracketing violations (100 random copulas)", violations,
        0.0, 0.0, "lower <= S <= min upper + 1/(2n)");
}

void criterion_8(Battery& b) {
  Rng rng(b.sub(80));
  const int n = 32;
  double min_score = kInf;
  double min_es = kInf;
  for (int trial = 0; trial < 50; ++trial) {
    const JointDist jd = random_perm_joint(n, 2, rng);
    const std::vector<double> y = {rng.uniform(), rng.uniform()};
    const double sy = s_beta_point(jd, y, exact_params()).value;
    const double es = sy - 0.5 * exact_scc(jd, 1.0);
    min_score = std::min(min_score, sy);
    min_es = std::min(min_es, es);
  }
  b.add(8, "min S(C,y) - sqrt(2)/4 over 50 cases",
        min_score - std::sqrt(2.0) / 4.0, 0.0, kInf, "score lower bound");
  b.add(8, "min ES(C,y) over 50 cases", min_es, -1e-12, kInf,
        "energy score nonnegative");
}

void criterion_9(Battery& b) {
  const HatComparison cmp =
      verify_hat_counterexample(1000000, b.sub(90), b.workers);
  const double target = std::sqrt(2.0) / 3.0;
  b.add(9, "ES(C+,0) mc 1e6",
        (cmp.es_comonotone.value - target) / cmp.es_comonotone.se, -3.0, 3.0,
        "within 3 SE of sqrt(2)/3");
  b.add(9, "ES(hat,0) < ES(C+,0) separation", cmp.separation_sigmas, 3.0,
        kInf, "at least 3 combined SE");
}

void criterion_10(Battery& b) {
  const double betas[3] = {0.5, 1.0, 1.5};
  for (double beta : betas) {
    double worst_max = 0.0, worst_min = 0.0;
    bool identity_always = true;
    for (int n = 2; n <= 6; ++n) {
      SearchProblem p;
      p.beta = beta;
      p.n = n;
      p.d = 2;
      p.restarts = 50;
      p.seed = b.sub(100 + n);
      p.workers = b.workers;
      p.objective = Objective::MaxScc;
      const SearchResult ls_max = local_search(p);
      const SearchResult bf_max = brute_force(p);
      worst_max = std::max(worst_max,
                           std::abs(ls_max.best_value - bf_max.best_value));
      p.objective = Objective::MinScc;
      const SearchResult ls_min = local_search(p);
      const SearchResult bf_min = brute_force(p);
      worst_min = std::max(worst_min,
                           std::abs(ls_min.best_value - bf_min.best_value));
      const auto& perms = ls_min.best.permutations();
      if (!perms) {
        identity_always = false;
      } else {
        for (const auto& sigma : *perms) {
          for (int i = 0; i < n; ++i) {
            if (sigma[i] != i) identity_always = false;
          }
        }
      }
    }
    char label[64];
    std::snprintf(label, sizeof(label), "beta=%g", beta);
    b.add(10, std::string("max |local - brute| max-scc, n<=6, ") + label,
          worst_max, 0.0, 1e-12, "exact agreement");
    b.add(10, std::string("max |local - brute| min-scc, n<=6, ") + label,
          worst_min, 0.0, 1e-12, "exact agreement");
    b.add(10, std::string("min-scc returns identity, n<=6, ") + label,
          identity_always ? 1.0 : 0.0, 1.0, 1.0, "comonotone minimizer");
  }
}

void criterion_11(Battery& b) {
  SearchProblem p;
  p.objective = Objective::MaxScc;
  p.n = 64;
  p.d = 2;
  p.beta = 1.0;
  p.restarts = 20;
  p.seed = b.sub(110);
  p.workers = b.workers;
  const SearchResult res = local_search(p);
  b.add(11, "max-scc local search n=64", res.best_value, 0.515,
        std::numbers::pi / 6.0 + 1.0 / 64, "near the sharp ceiling");
}

void criterion_12(Battery& b) {
  const double betas[3] = {0.5, 1.0, 1.5};

  {  // concavity of S_beta(F,F) under mixtures
    Rng rng(b.sub(121));
    double min_slack = kInf;
    for (int trial = 0; trial < 10; ++trial) {
      const double beta = betas[trial % 3];
      const int n = 16;
      const DiscreteCopula a =
          DiscreteCopula::from_permutations(n, random_perms(n, 2, rng));
      const DiscreteCopula c =
          DiscreteCopula::from_permutations(n, random_perms(n, 2, rng));
      const double sa = exact_scc(with_uniform_marginals(Copula::discrete(a)),
                                  beta);
      const double sc = exact_scc(with_uniform_marginals(Copula::discrete(c)),
                                  beta);
      for (double alpha : {0.25, 0.5, 0.75}) {
        const DiscreteCopula m = mix({{a, alpha}, {c, 1.0 - alpha}});
        const double sm = exact_scc(
            with_uniform_marginals(Copula::discrete(m)), beta);
        min_slack =
            std::min(min_slack, sm - alpha * sa - (1.0 - alpha) * sc);
      }
    }
    b.add(12, "concavity slack (mixtures)", min_slack, -1e-10, kInf,
          "S(mix,mix) >= alpha S(A,A) + (1-alpha) S(B,B)");
  }

  {  // 2 S(F,G) >= S(F,F) + S(G,G)
    Rng rng(b.sub(122));
    double min_slack = kInf;
    for (int trial = 0; trial < 20; ++trial) {
      const double beta = betas[trial % 3];
      const JointDist f = random_perm_joint(32, 2, rng);
      const JointDist g = random_perm_joint(32, 2, rng);
      const double sfg = s_beta(f, g, exact_params(beta)).value;
      min_slack = std::min(min_slack, 2.0 * sfg - exact_scc(f, beta) -
                                          exact_scc(g, beta));
    }
    b.add(12, "expected-distance inequality slack", min_slack, -1e-10, kInf,
          "2 S(F,G) >= S(F,F) + S(G,G)");
  }

  {  // propriety: the true forecast scores best in expectation
    Rng rng(b.sub(123));
    double min_slack = kInf;
    for (int trial = 0; trial < 10; ++trial) {
      const double beta = betas[trial % 3];
      const JointDist truth = random_perm_joint(32, 2, rng);
      const JointDist wrong = random_perm_joint(32, 2, rng);
      const double ideal = 0.5 * exact_scc(truth, beta);
      const double misspecified =
          s_beta(wrong, truth, exact_params(beta)).value -
          0.5 * exact_scc(wrong, beta);
      min_slack = std::min(min_slack, misspecified - ideal);
    }
    b.add(12, "propriety slack", min_slack, -1e-10, kInf,
          "expected score of the true forecast is minimal");
  }

  {  // translation invariance
    Rng rng(b.sub(124));
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const double beta = betas[trial % 3];
      std::vector<MarginalDist> ms, shifted;
      const double shift = 3.75;
      for (int k = 0; k < 2; ++k) {
        const double a = rng.uniform();
        const double w = 0.5 + rng.uniform();
        ms.push_back(MarginalDist::uniform(a, a + w));
        shifted.push_back(MarginalDist::uniform(a + shift, a + w + shift));
      }
      const DiscreteCopula dc =
          DiscreteCopula::from_permutations(16, random_perms(16, 2, rng));
      const JointDist f(Copula::discrete(dc), ms);
      const JointDist fs(Copula::discrete(dc), shifted);
      worst = std::max(worst, std::abs(exact_scc(f, beta) -
                                       exact_scc(fs, beta)));
    }
    b.add(12, "translation invariance drift", worst, 0.0, 1e-10,
          "S unchanged under a common shift");
  }

  {  // beta = 2 sees only marginals
    Rng rng(b.sub(125));
    const int n = 32;
    std::vector<double> centers(n);
    for (int i = 0; i < n; ++i) centers[i] = (i + 0.5) / n;
    const MarginalDist grid = MarginalDist::empirical(centers);
    const double reference = 2.0 * m2_cross(grid, grid);
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      const JointDist f = random_perm_joint(n, 2, rng);
      const JointDist g = random_perm_joint(n, 2, rng);
      worst = std::max(worst, std::abs(squared_moment(f, g) - reference));
    }
    b.add(12, "beta=2 dependence blindness", worst, 0.0, 1e-12,
          "E||X-Y||^2 equals the marginal moment sum");
  }

  {  // ES(C, y) attains its maximum over y at a vertex (beta = 1)
    Rng rng(b.sub(126));
    double worst = -kInf;
    for (int trial = 0; trial < 10; ++trial) {
      const JointDist f = random_perm_joint(16, 2, rng);
      const double half_scc = 0.5 * exact_scc(f, 1.0);
      double interior = -kInf;
      for (int k = 0; k < 50; ++k) {
        const std::vector<double> y = {rng.uniform(), rng.uniform()};
        interior = std::max(
            interior, s_beta_point(f, y, exact_params()).value - half_scc);
      }
      double vertex = -kInf;
      for (int mask = 0; mask < 4; ++mask) {
        const std::vector<double> y = {static_cast<double>(mask & 1),
                                       static_cast<double>((mask >> 1) & 1)};
        vertex = std::max(
            vertex, s_beta_point(f, y, exact_params()).value - half_scc);
      }
      worst = std::max(worst, interior - vertex);
    }
    b.add(12, "vertex maximum excess", worst, -kInf, 1e-12,
          "interior ES never beats the best vertex");
  }

  {  // S_beta(C, 0) is minimal at the comonotone copula
    Rng rng(b.sub(127));
    const int n = 32;
    const std::vector<double> origin = {0.0, 0.0};
    const JointDist cp = with_uniform_marginals(
        Copula::discrete(discretize(Copula::comonotone(2), n)));
    double min_slack = kInf;
    for (int trial = 0; trial < 20; ++trial) {
      const double beta = betas[trial % 3];
      const JointDist f = random_perm_joint(n, 2, rng);
      min_slack =
          std::min(min_slack,
                   s_beta_point(f, origin, exact_params(beta)).value -
                       s_beta_point(cp, origin, exact_params(beta)).value);
    }
    b.add(12, "S(C,0) minimum at C+ slack", min_slack, -1e-12, kInf,
          "comonotone copula minimizes the distance to the origin");
  }

  {  // symmetrization never hurts at y = (1/2,...,1/2)
    Rng rng(b.sub(128));
    const std::vector<double> center = {0.5, 0.5};
    double worst = -kInf;
    for (int trial = 0; trial < 10; ++trial) {
      const double beta = trial % 2 == 0 ? 1.0 : 1.5;
      const DiscreteCopula dc =
          DiscreteCopula::from_permutations(8, random_perms(8, 2, rng));
      const JointDist f = with_uniform_marginals(Copula::discrete(dc));
      const JointDist fs =
          with_uniform_marginals(Copula::discrete(symmetrize(dc)));
      const double es_f = energy_score(f, center, exact_params(beta)).value;
      const double es_s = energy_score(fs, center, exact_params(beta)).value;
      worst = std::max(worst, es_s - es_f);
    }
    b.add(12, "symmetrization increase at center", worst, -kInf, 1e-10,
          "ES(symmetrized C, 1/2) <= ES(C, 1/2)");
  }
}

}  // namespace

std::vector<CheckRow> run_reproduction(std::uint64_t seed, int workers) {
  Battery b{seed, workers, {}};
  criterion_1(b);
  criterion_2(b);
  criterion_3(b);
  criterion_4(b);
  criterion_5(b);
  criterion_6(b);
  criterion_7(b);
  criterion_8(b);
  criterion_9(b);
  criterion_10(b);
  criterion_11(b);
  criterion_12(b);
  return std::move(b.rows);
}

bool all_pass(const std::vector<CheckRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const CheckRow& r) { return r.pass; });
}

std::vector<std::pair<int, bool>> per_criterion(
    const std::vector<CheckRow>& rows) {
  std::map<int, bool> agg;
  for (const CheckRow& r : rows) {
    auto [it, inserted] = agg.emplace(r.criterion, r.pass);
    if (!inserted) it->second = it->second && r.pass;
  }
  return {agg.begin(), agg.end()};
}

std::string reproduction_table(const std::vector<CheckRow>& rows) {
  std::ostringstream os;
  std::size_t width = 0;
  for (const CheckRow& r : rows) width = std::max(width, r.name.size());
  for (const CheckRow& r : rows) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-4s c%02d  %-*s  got %-12.6g in [%g, %g]\n",
                  r.pass ? "ok" : "FAIL", r.criterion,
                  static_cast<int>(width), r.name.c_str(), r.got, r.lo, r.hi);
    os << line;
  }
  return os.str();
}

std::string reproduction_csv(const std::vector<CheckRow>& rows) {
  std::ostringstream os;
  os << "criterion,name,got,lo,hi,status,detail\n";
  for (const CheckRow& r : rows) {
    os << r.criterion << ",\"" << r.name << "\"," << format_double(r.got)
       << ',' << format_double(r.lo) << ',' << format_double(r.hi) << ','
       << (r.pass ? "pass" : "fail") << ",\"" << r.detail << "\"\n";
  }
  return os.str();
}

std::string reproduction_json(const std::vector<CheckRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckRow& r : rows) {
    arr.push_back({{"criterion", r.criterion},
                   {"name", r.name},
                   {"got", r.got},
                   {"lo", r.lo},
                   {"hi", r.hi},
                   {"pass", r.pass},
                   {"detail", r.detail}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace depbounds
