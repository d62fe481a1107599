#pragma once

#include <functional>
#include <vector>

namespace depbounds {

// Gauss-Legendre nodes and weights on [0,1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Cached rule of the given order (thread-safe).
const GaussRule& gauss_legendre(int order);

// Fixed-order Gauss-Legendre integral of f over [a,b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order);

// Adaptive Gauss-Kronrod (15/7) bisection to absolute tolerance `abs_tol`,
// stopping early at `max_nodes` function evaluations. Returns the best
// estimate accumulated so far in either case.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          int max_nodes = 200000);

}  // namespace depbounds
