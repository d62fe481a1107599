#pragma once

#include <optional>
#include <string>
#include <vector>

namespace depbounds {

enum class MarginalFamily { Uniform, PointMass, Empirical };

// Univariate distribution described by its quantile function plus moments.
// Instances are immutable; all member functions are pure.
class MarginalDist {
 public:
  static MarginalDist uniform(double a, double b);
  static MarginalDist point_mass(double c);
  // Takes the raw sample (any order); stored sorted.
  static MarginalDist empirical(std::vector<double> sample);

  MarginalFamily family() const { return family_; }
  double lo() const { return lo_; }  // uniform a / point c / sample min
  double hi() const { return hi_; }

  // Left-continuous generalized inverse cdf; requires 0 < u < 1.
  double quantile(double u) const;
  double cdf(double x) const;       // P(X <= x)
  double cdf_left(double x) const;  // P(X < x)

  double mean() const;
  double variance() const;

  // Center mu with quantile(u) + quantile(1-u) = 2*mu, when the family has
  // one (uniform and point mass do; empirical does not in general).
  std::optional<double> symmetry_center() const;
  bool unimodal() const;

  const std::vector<double>& sample_points() const { return sample_; }
  bool is_atomic() const { return family_ != MarginalFamily::Uniform; }

  // Unchecked evaluation used by samplers (u already in (0,1)).
  double quantile_unchecked(double u) const;

  bool operator==(const MarginalDist& other) const;

  std::string describe() const;

 private:
  MarginalDist() = default;
  MarginalFamily family_ = MarginalFamily::PointMass;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> sample_;  // empirical only, sorted
};

// Parses "uniform:a,b" | "point:c" | "empirical:<path>" (one number per line).
MarginalDist parse_marginal(const std::string& spec);

// Distribution of |X - Y| for independent X ~ f, Y ~ g. The cdf has a closed
// form for every supported family pair (uniform/uniform analytically, any
// atomic side by summing interval probabilities of the other side), and the
// quantile is its generalized inverse by bisection.
class DiamondDist {
 public:
  DiamondDist(MarginalDist f, MarginalDist g);

  double cdf(double x) const;       // requires x >= 0
  double quantile(double u) const;  // requires 0 < u < 1
  double max_abs() const { return zmax_; }

  const MarginalDist& f() const { return f_; }
  const MarginalDist& g() const { return g_; }

 private:
  MarginalDist f_, g_;
  double zmax_ = 0.0;
};

double diamond_cdf(const MarginalDist& f, const MarginalDist& g, double x);
double diamond_quantile(const MarginalDist& f, const MarginalDist& g,
                        double u);

// Generalized Gini mean difference E|X-Y|^beta for independent X ~ f, Y ~ g.
// Requires 0 < beta <= 2; closed forms for every supported family pair.
double gini_m(const MarginalDist& f, const MarginalDist& g, double beta);

// Same quantity through the quantile route, integrating
// diamond_quantile(u)^beta adaptively. Kept as an independent cross-check of
// the closed forms.
double gini_m_quadrature(const MarginalDist& f, const MarginalDist& g,
                         double beta, double abs_tol = 1e-10);

// E(X-Y)^2 = var(f) + var(g) + (mean(f) - mean(g))^2.
double m2_cross(const MarginalDist& f, const MarginalDist& g);

}  // namespace depbounds
