#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "depbounds/marginals.hpp"
#include "depbounds/rng.hpp"

namespace depbounds {

enum class CopulaKind {
  Comonotone,       // C+
  Countermonotone,  // C-, d = 2 only
  Independence,
  Parallel,   // C||, d = 2
  Spherical,  // C(circle), d in {2,3}
  Hat,        // counterexample copula, d = 2
  Discrete,
};

std::string copula_kind_name(CopulaKind kind);

// Finite copula supported on an n x ... x n grid of cell centers, weights
// summing to one with discrete-uniform (weight 1/n per level) marginals.
// Canonical form: support sorted lexicographically, points closer than 1e-12
// merged, so equality of copulas is decidable.
class DiscreteCopula {
 public:
  DiscreteCopula(int n, int d, std::vector<std::vector<double>> points,
                 std::vector<double> weights);

  // Permutation form: weight 1/n on ((i+1/2)/n, (sigma_1(i)+1/2)/n, ...);
  // perms are 0-based images, one per coordinate after the first.
  static DiscreteCopula from_permutations(int n,
                                          std::vector<std::vector<int>> perms);

  int grid_order() const { return n_; }
  int dim() const { return d_; }
  std::size_t support_size() const { return points_.size(); }
  const std::vector<std::vector<double>>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::optional<std::vector<std::vector<int>>>& permutations() const {
    return perms_;
  }

  bool operator==(const DiscreteCopula& other) const;

 private:
  void canonicalize();
  void validate() const;

  int n_ = 0;
  int d_ = 0;
  std::vector<std::vector<double>> points_;
  std::vector<double> weights_;
  std::optional<std::vector<std::vector<int>>> perms_;
};

// Tagged copula value. Parametric kinds are cheap tags; Discrete carries a
// DiscreteCopula.
class Copula {
 public:
  static Copula comonotone(int d);
  static Copula countermonotone();  // d = 2
  static Copula independence(int d);
  static Copula parallel();  // d = 2
  static Copula spherical(int d);
  static Copula hat();  // d = 2
  static Copula discrete(DiscreteCopula dc);

  CopulaKind kind() const { return kind_; }
  int dim() const { return d_; }
  const DiscreteCopula& discrete_data() const;

  // Number of uniforms consumed per sample; fixed per kind so that
  // sample streams are reproducible.
  int draws_per_sample() const;

  // One sample of (U_1,...,U_d) written to out[0..d).
  void sample_point(double* out, Rng& rng) const;

  bool operator==(const Copula& other) const;

 private:
  Copula(CopulaKind kind, int d) : kind_(kind), d_(d) {}
  CopulaKind kind_;
  int d_;
  std::optional<DiscreteCopula> discrete_;
  std::vector<double> cum_weights_;  // discrete sampling
};

// Sklar coupling of a copula with d marginal distributions.
struct JointDist {
  JointDist(Copula c, std::vector<MarginalDist> m);
  Copula copula;
  std::vector<MarginalDist> marginals;
  int dim() const { return copula.dim(); }
  bool operator==(const JointDist& other) const;
};

// Convenience: copula with uniform(0,1) marginals.
JointDist with_uniform_marginals(Copula c);

// count samples of the joint distribution, deterministic in (seed, workers):
// worker w generates the w-th contiguous block from substream w.
std::vector<std::vector<double>> sample(const JointDist& dist, long long count,
                                        std::uint64_t seed, int workers = 1);

// Grid discretization; supported kinds: comonotone, countermonotone,
// independence, parallel (n even).
DiscreteCopula discretize(const Copula& c, int n);

// Element of the hyperoctahedral group: y[i] = x[perm[i]], then reflected
// coordinates are mapped t -> 1-t.
struct SymmetryElement {
  std::vector<int> perm;
  std::vector<bool> reflect;
};

std::vector<SymmetryElement> hyperoctahedral_group(int d);

DiscreteCopula apply_symmetry(const DiscreteCopula& c,
                              const SymmetryElement& t);

// Uniform mixture of the orbit of c under the full group (d <= 3).
DiscreteCopula symmetrize(const DiscreteCopula& c);

// Weighted mixture; requires equal grids and positive weights summing to 1.
DiscreteCopula mix(
    const std::vector<std::pair<DiscreteCopula, double>>& parts);

// CLI grammar: comonotone | countermonotone | independence | parallel |
// spherical | hat | file:<path>.
Copula parse_copula(const std::string& spec, int d);

// Text format: "n d k" then k lines of d coordinates and a weight.
DiscreteCopula read_discrete_copula(std::istream& in);
DiscreteCopula read_discrete_copula_file(const std::string& path);
void write_discrete_copula(std::ostream& out, const DiscreteCopula& dc);
std::string discrete_copula_text(const DiscreteCopula& dc);

}  // namespace depbounds
