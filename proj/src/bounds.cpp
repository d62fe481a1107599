#include "depbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "depbounds/errors.hpp"
#include "depbounds/quadrature.hpp"

namespace depbounds {

namespace {

void check_beta_open(double beta) {
  if (!(beta > 0.0 && beta < 2.0)) {
    throw DomainError("beta must lie in (0,2), got " + std::to_string(beta));
  }
}

bool all_equal(const std::vector<MarginalDist>& ms) {
  return std::all_of(ms.begin(), ms.end(),
                     [&](const MarginalDist& m) { return m == ms.front(); });
}

bool all_standard_uniform(const std::vector<MarginalDist>& ms) {
  return std::all_of(ms.begin(), ms.end(), [](const MarginalDist& m) {
    return m.family() == MarginalFamily::Uniform && m.lo() == 0.0 &&
           m.hi() == 1.0;
  });
}

}  // namespace

double sphere_mean_distance_constant(int d) {
  switch (d) {
    case 2: return std::numbers::pi / std::sqrt(6.0);
    case 3: return 4.0 / 3.0;
    case 4: return 64.0 / (15.0 * std::numbers::pi);
  }
  throw DomainError("sphere constant known only for d in {2,3,4}");
}

double lower_bound_s(const std::vector<MarginalDist>& f,
                     const std::vector<MarginalDist>& g, double beta) {
  check_beta_open(beta);
  if (f.size() != g.size() || f.empty()) {
    throw DomainError("marginal lists must be nonempty and equally long");
  }
  const auto d = f.size();
  if (all_equal(f) && all_equal(g)) {
    return std::pow(static_cast<double>(d), 0.5 * beta) *
           gini_m(f.front(), g.front(), beta);
  }
  std::vector<DiamondDist> dia;
  dia.reserve(d);
  for (std::size_t i = 0; i < d; ++i) dia.emplace_back(f[i], g[i]);
  return integrate_adaptive(
      [&](double u) {
        double s2 = 0.0;
        for (const DiamondDist& z : dia) {
          const double q = z.quantile(u);
          s2 += q * q;
        }
        return std::pow(s2, 0.5 * beta);
      },
      1e-12, 1.0 - 1e-12, 1e-10);
}

double upper_bound_s(const std::vector<MarginalDist>& f,
                     const std::vector<MarginalDist>& g, double beta) {
  check_beta_open(beta);
  if (f.size() != g.size() || f.empty()) {
    throw DomainError("marginal lists must be nonempty and equally long");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += m2_cross(f[i], g[i]);
  return std::pow(sum, 0.5 * beta);
}

SharpBound sharp_upper_scc(int d, double beta) {
  if (d < 2) throw DomainError("sharp_upper_scc requires d >= 2");
  if (beta != 1.0) {
    throw CapabilityError(
        "the sharp S(C,C) bound is only available for beta = 1");
  }
  switch (d) {
    case 2: return {std::numbers::pi / 6.0, true};
    case 3: return {2.0 / 3.0, true};
    case 4:
      return {std::sqrt(1.0 / 3.0) * sphere_mean_distance_constant(4), false};
    default:
      return {std::sqrt(d / 6.0), false};
  }
}

double lower_bound_score(int d, double beta) {
  check_beta_open(beta);
  if (d < 1) throw DomainError("dimension must be >= 1");
  return std::pow(static_cast<double>(d), 0.5 * beta) *
         std::pow(0.5, beta) / (beta + 1.0);
}

double BoundsReport::max_lower() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const BoundRow& r : lower) v = std::max(v, r.value);
  return v;
}

double BoundsReport::min_upper() const {
  double v = std::numeric_limits<double>::infinity();
  for (const BoundRow& r : upper) v = std::min(v, r.value);
  return v;
}

bool BoundsReport::bounds_consistent() const {
  return max_lower() <= min_upper() + 1e-12;
}

bool BoundsReport::estimate_bracketed() const {
  if (!estimate) return true;
  const double slack = 3.0 * estimate->se;
  return estimate->value >= max_lower() - slack - 1e-12 &&
         estimate->value <= min_upper() + slack + 1e-12;
}

BoundsReport bounds_report(const std::vector<MarginalDist>& f,
                           const std::vector<MarginalDist>& g, double beta,
                           std::optional<Estimate> estimate) {
  BoundsReport rep;
  rep.d = static_cast<int>(f.size());
  rep.beta = beta;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) rep.marginal_desc += " ";
    rep.marginal_desc += f[i].describe();
  }
  if (f != g) {
    rep.marginal_desc += " vs";
    for (const MarginalDist& m : g) rep.marginal_desc += " " + m.describe();
  }

  const bool identical_sides = all_equal(f) && all_equal(g);
  rep.lower.push_back({"comonotone-lower", lower_bound_s(f, g, beta),
                       identical_sides, "comonotone-arrangement"});
  rep.upper.push_back(
      {"jensen-upper", upper_bound_s(f, g, beta), false, "second-moment"});
  if (beta == 1.0 && f == g && all_standard_uniform(f) && rep.d >= 2) {
    const SharpBound sb = sharp_upper_scc(rep.d, beta);
    rep.upper.push_back({"same-copula-upper", sb.value, sb.sharp,
                         rep.d <= 4 ? "sphere-extremal" : "second-moment"});
  }
  rep.estimate = std::move(estimate);
  return rep;
}

}  // namespace depbounds
