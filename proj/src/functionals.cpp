#include "depbounds/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "depbounds/errors.hpp"
#include "depbounds/pieces.hpp"
#include "depbounds/rng.hpp"

namespace depbounds {

namespace {

void check_beta_score(double beta) {
  if (!(beta > 0.0 && beta < 2.0)) {
    throw DomainError("beta must lie in (0,2), got " + std::to_string(beta));
  }
}

double powb(double s2, double beta) {
  if (beta == 1.0) return std::sqrt(s2);
  return std::pow(s2, 0.5 * beta);
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = a[i] - b[i];
    s += e * e;
  }
  return s;
}

// Welford accumulator, mergeable in a fixed order across substreams.
struct Moments {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d1 = x - mean;
    mean += d1 / static_cast<double>(n);
    m2 += d1 * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double delta = o.mean - mean;
    const auto total = static_cast<double>(n + o.n);
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) *
                     static_cast<double>(o.n) / total;
    n += o.n;
  }

  double se() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) /
                     static_cast<double>(n));
  }
};

// One Monte Carlo pass: each worker owns substreams and a contiguous index
// block; blocks are merged in worker order, so the result depends only on
// (seed, workers).
template <typename PairFn>
Estimate monte_carlo(long long count, int workers, PairFn&& fn) {
  if (count < 2) throw DomainError("monte-carlo needs at least 2 samples");
  if (workers < 1) throw DomainError("worker count must be >= 1");
  std::vector<Moments> parts(workers);
  auto run = [&](int w) {
    const long long lo = count * w / workers;
    const long long hi = count * (w + 1) / workers;
    Moments acc;
    fn(w, lo, hi, acc);
    parts[w] = acc;
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  Moments total;
  for (const Moments& p : parts) total.merge(p);
  Estimate e;
  e.value = total.mean;
  e.se = total.se();
  e.method = Method::MonteCarlo;
  e.effort = count;
  return e;
}

Estimate mc_s_beta(const JointDist& f, const JointDist& g, double beta,
                   long long count, std::uint64_t seed, int workers) {
  const int d = f.dim();
  return monte_carlo(count, workers,
                     [&](int w, long long lo, long long hi, Moments& acc) {
                       Rng rx = Rng::stream(seed, 2 * w);
                       Rng ry = Rng::stream(seed, 2 * w + 1);
                       std::vector<double> ux(d), uy(d);
                       for (long long i = lo; i < hi; ++i) {
                         f.copula.sample_point(ux.data(), rx);
                         g.copula.sample_point(uy.data(), ry);
                         double s2 = 0.0;
                         for (int k = 0; k < d; ++k) {
                           const double e =
                               f.marginals[k].quantile_unchecked(ux[k]) -
                               g.marginals[k].quantile_unchecked(uy[k]);
                           s2 += e * e;
                         }
                         acc.add(powb(s2, beta));
                       }
                     });
}

Estimate mc_s_beta_point(const JointDist& f, const std::vector<double>& y,
                         double beta, long long count, std::uint64_t seed,
                         int workers) {
  const int d = f.dim();
  return monte_carlo(count, workers,
                     [&](int w, long long lo, long long hi, Moments& acc) {
                       Rng rx = Rng::stream(seed, w);
                       std::vector<double> ux(d);
                       for (long long i = lo; i < hi; ++i) {
                         f.copula.sample_point(ux.data(), rx);
                         double s2 = 0.0;
                         for (int k = 0; k < d; ++k) {
                           const double e =
                               f.marginals[k].quantile_unchecked(ux[k]) - y[k];
                           s2 += e * e;
                         }
                         acc.add(powb(s2, beta));
                       }
                     });
}

double exact_pairwise(
    const std::vector<std::pair<std::vector<double>, double>>& a,
    const std::vector<std::pair<std::vector<double>, double>>& b,
    double beta) {
  double total = 0.0;
  for (const auto& [p, wp] : a) {
    double row = 0.0;
    for (const auto& [q, wq] : b) {
      row += wq * powb(dist2(p, q), beta);
    }
    total += wp * row;
  }
  return total;
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Exact: return "exact";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "exact") return Method::Exact;
  if (name == "quadrature") return Method::Quadrature;
  if (name == "mc" || name == "monte-carlo") return Method::MonteCarlo;
  throw DomainError("unknown method '" + name +
                    "' (expected exact | quadrature | mc)");
}

bool atomic_support(const JointDist& dist) {
  if (dist.copula.kind() == CopulaKind::Discrete) return true;
  return std::all_of(dist.marginals.begin(), dist.marginals.end(),
                     [](const MarginalDist& m) {
                       return m.family() == MarginalFamily::PointMass;
                     });
}

std::vector<std::pair<std::vector<double>, double>> atoms_of(
    const JointDist& dist) {
  const int d = dist.dim();
  std::vector<std::pair<std::vector<double>, double>> atoms;
  if (dist.copula.kind() == CopulaKind::Discrete) {
    const DiscreteCopula& dc = dist.copula.discrete_data();
    atoms.reserve(dc.support_size());
    for (std::size_t i = 0; i < dc.support_size(); ++i) {
      std::vector<double> x(d);
      for (int k = 0; k < d; ++k) {
        x[k] = dist.marginals[k].quantile_unchecked(dc.points()[i][k]);
      }
      atoms.emplace_back(std::move(x), dc.weights()[i]);
    }
    return atoms;
  }
  std::vector<double> x(d);
  for (int k = 0; k < d; ++k) {
    if (dist.marginals[k].family() != MarginalFamily::PointMass) {
      throw CapabilityError("distribution has no atomic support");
    }
    x[k] = dist.marginals[k].lo();
  }
  atoms.emplace_back(std::move(x), 1.0);
  return atoms;
}

Estimate s_beta(const JointDist& f, const JointDist& g,
                const FunctionalParams& params) {
  if (f.dim() != g.dim()) throw DomainError("dimension mismatch");
  check_beta_score(params.beta);
  switch (params.method) {
    case Method::Exact: {
      const bool fa = atomic_support(f);
      const bool ga = atomic_support(g);
      if (fa && ga) {
        const auto af = atoms_of(f);
        const auto ag = atoms_of(g);
        Estimate e;
        e.value = exact_pairwise(af, ag, params.beta);
        e.method = Method::Exact;
        e.effort = static_cast<long long>(af.size()) *
                   static_cast<long long>(ag.size());
        return e;
      }
      if (fa || ga) {
        Estimate e = mc_s_beta(f, g, params.beta, params.samples, params.seed,
                               params.workers);
        e.mc_fallback = true;
        return e;
      }
      throw CapabilityError(
          "exact method needs atomic supports on both sides; "
          "supported methods here: quadrature (piecewise-affine supports) or "
          "mc");
    }
    case Method::Quadrature: {
      auto pf = decompose(f);
      auto pg = decompose(g);
      if (!pf || !pg) {
        throw CapabilityError(
            "quadrature needs affine support pieces on both sides "
            "(comonotone | countermonotone | parallel | hat copulas with "
            "uniform or point-mass marginals); supported methods here: mc" +
            std::string(atomic_support(f) && atomic_support(g) ? ", exact"
                                                               : ""));
      }
      Estimate e;
      e.value = s_beta_pieces(*pf, *pg, params.beta, params.quad_order);
      e.method = Method::Quadrature;
      e.effort = params.quad_order;
      return e;
    }
    case Method::MonteCarlo:
      return mc_s_beta(f, g, params.beta, params.samples, params.seed,
                       params.workers);
  }
  throw CapabilityError("unreachable");
}

Estimate s_beta_point(const JointDist& f, const std::vector<double>& y,
                      const FunctionalParams& params) {
  if (static_cast<int>(y.size()) != f.dim()) {
    throw DomainError("observation dimension mismatch");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw DomainError("observation must be finite");
  }
  check_beta_score(params.beta);
  switch (params.method) {
    case Method::Exact: {
      if (!atomic_support(f)) {
        Estimate e = mc_s_beta_point(f, y, params.beta, params.samples,
                                     params.seed, params.workers);
        e.mc_fallback = true;
        return e;
      }
      const auto af = atoms_of(f);
      std::vector<std::pair<std::vector<double>, double>> one = {{y, 1.0}};
      Estimate e;
      e.value = exact_pairwise(af, one, params.beta);
      e.method = Method::Exact;
      e.effort = static_cast<long long>(af.size());
      return e;
    }
    case Method::Quadrature: {
      auto pf = decompose(f);
      if (!pf) {
        throw CapabilityError(
            "quadrature needs an affine piece decomposition of the forecast; "
            "supported methods here: mc" +
            std::string(atomic_support(f) ? ", exact" : ""));
      }
      SupportPiece ypiece;
      ypiece.param_dim = 0;
      ypiece.origin = y;
      ypiece.dir1.assign(y.size(), 0.0);
      ypiece.dir2.assign(y.size(), 0.0);
      Estimate e;
      e.value = s_beta_pieces(*pf, {ypiece}, params.beta, params.quad_order);
      e.method = Method::Quadrature;
      e.effort = params.quad_order;
      return e;
    }
    case Method::MonteCarlo:
      return mc_s_beta_point(f, y, params.beta, params.samples, params.seed,
                             params.workers);
  }
  throw CapabilityError("unreachable");
}

Estimate energy_score(const JointDist& f, const std::vector<double>& y,
                      const FunctionalParams& params) {
  check_beta_score(params.beta);
  FunctionalParams p1 = params;
  p1.seed = stream_seed(params.seed, 21);
  FunctionalParams p2 = params;
  p2.seed = stream_seed(params.seed, 22);
  const Estimate sy = s_beta_point(f, y, p1);
  const Estimate sff = s_beta(f, f, p2);
  Estimate e;
  e.value = sy.value - 0.5 * sff.value;
  e.se = std::sqrt(sy.se * sy.se + 0.25 * sff.se * sff.se);
  e.method = params.method;
  e.effort = sy.effort + sff.effort;
  e.mc_fallback = sy.mc_fallback || sff.mc_fallback;
  return e;
}

Estimate energy_distance(const JointDist& f, const JointDist& g,
                         const FunctionalParams& params) {
  check_beta_score(params.beta);
  if (f == g) {
    Estimate e;
    e.method = params.method;
    return e;  // identical distributions: distance exactly 0
  }
  FunctionalParams pfg = params;
  pfg.seed = stream_seed(params.seed, 11);
  FunctionalParams pff = params;
  pff.seed = stream_seed(params.seed, 12);
  FunctionalParams pgg = params;
  pgg.seed = stream_seed(params.seed, 13);
  const Estimate sfg = s_beta(f, g, pfg);
  const Estimate sff = s_beta(f, f, pff);
  const Estimate sgg = s_beta(g, g, pgg);
  Estimate e;
  e.value = sfg.value - 0.5 * sff.value - 0.5 * sgg.value;
  e.se = std::sqrt(sfg.se * sfg.se + 0.25 * sff.se * sff.se +
                   0.25 * sgg.se * sgg.se);
  e.method = params.method;
  e.effort = sfg.effort + sff.effort + sgg.effort;
  e.mc_fallback = sfg.mc_fallback || sff.mc_fallback || sgg.mc_fallback;
  return e;
}

// ---------------------------------------------------------------------------
// PermutationState
// ---------------------------------------------------------------------------

PermutationState::PermutationState(int n, std::vector<std::vector<int>> perms,
                                   double beta)
    : n_(n), d_(static_cast<int>(perms.size()) + 1), beta_(beta),
      perms_(std::move(perms)) {
  check_beta_score(beta_);
  if (n_ < 2) throw DomainError("grid order must be >= 2");
  points_.assign(static_cast<std::size_t>(n_) * d_, 0.0);
  for (int i = 0; i < n_; ++i) {
    points_[static_cast<std::size_t>(i) * d_] = (i + 0.5) / n_;
    for (int k = 1; k < d_; ++k) {
      points_[static_cast<std::size_t>(i) * d_ + k] =
          (perms_[k - 1][i] + 0.5) / n_;
    }
  }
  recompute();
}

PermutationState::PermutationState(int n, std::vector<std::vector<int>> perms,
                                   double beta, std::vector<double> y)
    : PermutationState(n, std::move(perms), beta) {
  if (static_cast<int>(y.size()) != d_) {
    throw DomainError("observation dimension mismatch");
  }
  y_ = std::move(y);
  has_y_ = true;
  recompute();
}

double PermutationState::pair_term(int a, int b) const {
  double s2 = 0.0;
  const double* pa = &points_[static_cast<std::size_t>(a) * d_];
  const double* pb = &points_[static_cast<std::size_t>(b) * d_];
  for (int k = 0; k < d_; ++k) {
    const double e = pa[k] - pb[k];
    s2 += e * e;
  }
  return powb(s2, beta_);
}

double PermutationState::point_term(int a) const {
  double s2 = 0.0;
  const double* pa = &points_[static_cast<std::size_t>(a) * d_];
  for (int k = 0; k < d_; ++k) {
    const double e = pa[k] - y_[k];
    s2 += e * e;
  }
  return powb(s2, beta_);
}

void PermutationState::recompute() {
  scc_sum_ = 0.0;
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) scc_sum_ += 2.0 * pair_term(a, b);
  }
  point_sum_ = 0.0;
  if (has_y_) {
    for (int a = 0; a < n_; ++a) point_sum_ += point_term(a);
  }
}

double PermutationState::scc_value() const {
  return scc_sum_ / (static_cast<double>(n_) * n_);
}

double PermutationState::point_value() const {
  if (!has_y_) throw DomainError("state has no observation");
  return point_sum_ / n_;
}

double PermutationState::scc_delta(int k, int i, int j) const {
  if (k < 0 || k >= d_ - 1 || i == j || i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw DomainError("bad swap indices");
  }
  const int col = k + 1;
  const double pi_new = points_[static_cast<std::size_t>(j) * d_ + col];
  const double pj_new = points_[static_cast<std::size_t>(i) * d_ + col];
  double delta = 0.0;
  for (int b = 0; b < n_; ++b) {
    if (b == i || b == j) continue;
    const double* pb = &points_[static_cast<std::size_t>(b) * d_];
    double old_i = 0.0, new_i = 0.0, old_j = 0.0, new_j = 0.0;
    const double* pi = &points_[static_cast<std::size_t>(i) * d_];
    const double* pj = &points_[static_cast<std::size_t>(j) * d_];
    for (int c = 0; c < d_; ++c) {
      const double ei = pi[c] - pb[c];
      const double ej = pj[c] - pb[c];
      old_i += ei * ei;
      old_j += ej * ej;
      const double ni = (c == col ? pi_new : pi[c]) - pb[c];
      const double nj = (c == col ? pj_new : pj[c]) - pb[c];
      new_i += ni * ni;
      new_j += nj * nj;
    }
    delta += powb(new_i, beta_) + powb(new_j, beta_) - powb(old_i, beta_) -
             powb(old_j, beta_);
  }
  // the (i,j) pair itself: only coordinate `col` of both endpoints swaps,
  // which leaves their mutual distance unchanged in absolute value
  delta *= 2.0;
  return delta / (static_cast<double>(n_) * n_);
}

double PermutationState::point_delta(int k, int i, int j) const {
  if (!has_y_) throw DomainError("state has no observation");
  if (k < 0 || k >= d_ - 1 || i == j || i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw DomainError("bad swap indices");
  }
  const int col = k + 1;
  const double* pi = &points_[static_cast<std::size_t>(i) * d_];
  const double* pj = &points_[static_cast<std::size_t>(j) * d_];
  double old_i = 0.0, new_i = 0.0, old_j = 0.0, new_j = 0.0;
  for (int c = 0; c < d_; ++c) {
    const double ei = pi[c] - y_[c];
    const double ej = pj[c] - y_[c];
    old_i += ei * ei;
    old_j += ej * ej;
    const double ni = (c == col ? pj[col] : pi[c]) - y_[c];
    const double nj = (c == col ? pi[col] : pj[c]) - y_[c];
    new_i += ni * ni;
    new_j += nj * nj;
  }
  const double delta = powb(new_i, beta_) + powb(new_j, beta_) -
                       powb(old_i, beta_) - powb(old_j, beta_);
  return delta / n_;
}

void PermutationState::apply_swap(int k, int i, int j) {
  const double dscc = scc_delta(k, i, j);
  double dpoint = 0.0;
  if (has_y_) dpoint = point_delta(k, i, j);
  const int col = k + 1;
  std::swap(perms_[k][i], perms_[k][j]);
  std::swap(points_[static_cast<std::size_t>(i) * d_ + col],
            points_[static_cast<std::size_t>(j) * d_ + col]);
  scc_sum_ += dscc * static_cast<double>(n_) * n_;
  point_sum_ += dpoint * n_;
}

DiscreteCopula PermutationState::to_copula() const {
  return DiscreteCopula::from_permutations(n_, perms_);
}

void PermutationState::verify() const {
  PermutationState fresh = has_y_
                               ? PermutationState(n_, perms_, beta_, y_)
                               : PermutationState(n_, perms_, beta_);
  if (std::abs(fresh.scc_sum_ - scc_sum_) >
      1e-10 * static_cast<double>(n_) * n_) {
    throw IntegrityError("cached pair sum drifted from the support state");
  }
  if (has_y_ && std::abs(fresh.point_sum_ - point_sum_) > 1e-10 * n_) {
    throw IntegrityError("cached point sum drifted from the support state");
  }
}

double s_beta_discrete_delta(const DiscreteCopula& c, int k, int i, int j,
                             const PermutationState& state) {
  const auto& perms = c.permutations();
  if (!perms) {
    throw DomainError("copula is not in permutation form");
  }
  if (c.grid_order() != state.grid_order() || c.dim() != state.dim() ||
      *perms != state.permutations()) {
    throw IntegrityError("cached state does not match the copula");
  }
  return state.scc_delta(k, i, j);
}

}  // namespace depbounds
