#pragma once

#include <optional>
#include <vector>

#include "depbounds/copulas.hpp"

namespace depbounds {

// Piece of the support of a Sklar coupling, parametrized affinely by 0, 1 or
// 2 uniform parameters on [0,1]:
//   dim 0: the point `origin`
//   dim 1: origin + u * dir1
//   dim 2: origin + u * dir1 + v * dir2   (dir1 orthogonal to dir2)
// A coupling decomposes into weighted pieces when its copula is supported on
// finitely many such faces (comonotone, countermonotone, parallel, hat) and
// all marginal quantiles are affine (uniform or point mass).
struct SupportPiece {
  double weight = 1.0;
  int param_dim = 0;
  std::vector<double> origin;
  std::vector<double> dir1;
  std::vector<double> dir2;
};

// nullopt when the distribution has no affine piece decomposition.
std::optional<std::vector<SupportPiece>> decompose(const JointDist& dist);

// Mean of ||X - Y||^beta for X uniform on piece a, Y uniform on piece b.
// Pairs whose supports touch are integrated with the singular point split
// off and the radial direction integrated in closed form, so the result is
// accurate to near machine precision for smooth cases and ~1e-12 for
// crossing lines; plain tensor Gauss-Legendre otherwise.
double piece_pair_integral(const SupportPiece& a, const SupportPiece& b,
                           double beta, int order);

double s_beta_pieces(const std::vector<SupportPiece>& fa,
                     const std::vector<SupportPiece>& fb, double beta,
                     int order);

}  // namespace depbounds
