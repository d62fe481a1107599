#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "depbounds/copulas.hpp"

namespace depbounds {

enum class Method { Exact, Quadrature, MonteCarlo };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct FunctionalParams {
  double beta = 1.0;
  Method method = Method::MonteCarlo;
  long long samples = 100000;  // Monte Carlo pair count
  int quad_order = 64;         // Gauss-Legendre order per axis
  std::uint64_t seed = 0;
  int workers = 1;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;  // 0 for exact/quadrature
  Method method = Method::Exact;
  long long effort = 0;     // samples or quadrature order
  bool mc_fallback = false;  // exact was requested but only one side atomic
};

// True when the joint distribution has finitely many atoms (discrete copula,
// or every marginal a point mass).
bool atomic_support(const JointDist& dist);

// The atoms (points in R^d with weights) of an atomic joint distribution.
std::vector<std::pair<std::vector<double>, double>> atoms_of(
    const JointDist& dist);

// S_beta(F,G) = E ||X - Y||^beta for independent X ~ F, Y ~ G.
// exact: both sides atomic (pairwise sum); one atomic side falls back to
// Monte Carlo with `mc_fallback` set. quadrature: both supports decompose
// into affine pieces. monte-carlo: always available, two independent
// substream batches, plug-in standard error.
Estimate s_beta(const JointDist& f, const JointDist& g,
                const FunctionalParams& params);

// S_beta(F,y) with y identified with its one-point measure.
Estimate s_beta_point(const JointDist& f, const std::vector<double>& y,
                      const FunctionalParams& params);

// ES_beta(F,y) = S_beta(F,y) - S_beta(F,F)/2.
Estimate energy_score(const JointDist& f, const std::vector<double>& y,
                      const FunctionalParams& params);

// Energy distance in the score-coherent normalization
//   E_beta(F,G) = S_beta(F,G) - S_beta(F,F)/2 - S_beta(G,G)/2,
// so that E_beta(F, point mass at y) = ES_beta(F,y). Zero iff F = G.
Estimate energy_distance(const JointDist& f, const JointDist& g,
                         const FunctionalParams& params);

// Mutable search state over a permutation copula: keeps the support points
// and running sums of S_beta(C,C) (and S_beta(C,y) when an observation is
// given) so that a transposition can be evaluated in O(n) and applied
// incrementally.
class PermutationState {
 public:
  // perms: one 0-based permutation per coordinate after the first.
  PermutationState(int n, std::vector<std::vector<int>> perms, double beta);
  PermutationState(int n, std::vector<std::vector<int>> perms, double beta,
                   std::vector<double> y);

  int grid_order() const { return n_; }
  int dim() const { return d_; }
  double beta() const { return beta_; }

  double scc_value() const;    // S_beta(C,C)
  double point_value() const;  // S_beta(C,y)

  // Change of the value if sigma_k(i) and sigma_k(j) were transposed
  // (k indexes the free coordinates, 0 <= k <= d-2).
  double scc_delta(int k, int i, int j) const;
  double point_delta(int k, int i, int j) const;

  void apply_swap(int k, int i, int j);

  const std::vector<std::vector<int>>& permutations() const { return perms_; }
  DiscreteCopula to_copula() const;

  // Recomputes both sums from scratch; throws IntegrityError if the cached
  // values drifted by more than 1e-10.
  void verify() const;

 private:
  double pair_term(int a, int b) const;
  double point_term(int a) const;
  void recompute();

  int n_;
  int d_;
  double beta_;
  std::vector<std::vector<int>> perms_;
  std::vector<double> points_;  // n x d row-major
  std::vector<double> y_;
  bool has_y_ = false;
  double scc_sum_ = 0.0;    // sum over all ordered pairs
  double point_sum_ = 0.0;  // sum over support points
};

// S_beta(C',C') - S_beta(C,C) for the transposition sigma_k(i) <-> sigma_k(j)
// of a permutation-form copula, in O(n) arithmetic. The cached state must
// have been built from `c`; a mismatch raises IntegrityError.
double s_beta_discrete_delta(const DiscreteCopula& c, int k, int i, int j,
                             const PermutationState& state);

}  // namespace depbounds
