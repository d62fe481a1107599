#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depbounds/functionals.hpp"
#include "depbounds/marginals.hpp"

namespace depbounds {

// Maximal mean distance of two independent copies over all distributions
// with E||X||^2 <= 1: pi/sqrt(6) (d=2), 4/3 (d=3), 64/(15 pi) (d=4).
double sphere_mean_distance_constant(int d);

// Lower bound on S_beta(F,G) over all couplings: the comonotone arrangement
// of the componentwise |X_i - Y_i| distributions,
//   integral over u of (sum_i diamond_quantile_i(u)^2)^(beta/2).
// Closed form d^(beta/2) * M_beta(F_1,G_1) when each side has identical
// marginals. Requires 0 < beta < 2.
double lower_bound_s(const std::vector<MarginalDist>& f,
                     const std::vector<MarginalDist>& g, double beta);

// Jensen upper bound (sum_i M_2(F_i,G_i))^(beta/2).
double upper_bound_s(const std::vector<MarginalDist>& f,
                     const std::vector<MarginalDist>& g, double beta);

struct SharpBound {
  double value;
  bool sharp;
};

// Upper bound on S(C,C) over copulas at beta = 1: pi/6 (d=2, sharp),
// 2/3 (d=3, sharp), sqrt(1/3)*64/(15 pi) (d=4, not sharp), sqrt(d/6)
// otherwise (Jensen fallback, not sharp). Other beta are unsupported.
SharpBound sharp_upper_scc(int d, double beta = 1.0);

// Lower bound on S_beta(C,y) over copulas C and observations y in [0,1]^d:
// d^(beta/2) * (1/2)^beta / (beta+1).
double lower_bound_score(int d, double beta);

struct BoundRow {
  std::string name;
  double value;
  bool sharp;
  std::string derivation;  // short slug naming the argument behind the bound
};

struct BoundsReport {
  int d = 0;
  double beta = 1.0;
  std::string marginal_desc;
  std::vector<BoundRow> lower;
  std::vector<BoundRow> upper;
  std::optional<Estimate> estimate;

  double max_lower() const;
  double min_upper() const;
  bool bounds_consistent() const;   // every lower <= every upper
  bool estimate_bracketed() const;  // within the 3-SE widened bracket
};

// Assembles all applicable bounds; the sharp S(C,C) bound is included when
// both marginal lists are uniform(0,1), structurally equal, and beta = 1.
BoundsReport bounds_report(const std::vector<MarginalDist>& f,
                           const std::vector<MarginalDist>& g, double beta,
                           std::optional<Estimate> estimate = std::nullopt);

}  // namespace depbounds
