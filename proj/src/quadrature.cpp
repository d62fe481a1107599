#include "depbounds/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace depbounds {

namespace {

// Legendre nodes on (-1,1) by Newton iteration from the Chebyshev guess.
GaussRule compute_rule(int order) {
  if (order < 1) throw std::invalid_argument("quadrature order must be >= 1");
  const int n = order;
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    // map to [0,1]
    rule.x[i] = 0.5 * (1.0 - x);
    rule.w[i] = 0.5 * w;
    rule.x[n - 1 - i] = 0.5 * (1.0 + x);
    rule.w[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

// Gauss-Kronrod 15-point pair (abscissae on (0,1) side; symmetric).
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kGaussW[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};

struct PanelResult {
  double kronrod;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kKronrodX[i]);
    fv[14 - i] = f(c + h * kKronrodX[i]);
  }
  fv[7] = f(c);
  double kron = kKronrodW[7] * fv[7];
  double gauss = kGaussW[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += kGaussW[i / 2] * (fv[i] + fv[14 - i]);
  }
  kron *= h;
  gauss *= h;
  return {kron, std::abs(kron - gauss)};
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double h = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    sum += rule.w[i] * f(a + h * rule.x[i]);
  }
  return h * sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int max_nodes) {
  struct Panel {
    double a, b, value, error;
  };
  std::vector<Panel> panels;
  PanelResult first = gk15(f, a, b);
  panels.push_back({a, b, first.kronrod, first.error});
  int evals = 15;

  while (evals < max_nodes) {
    // find worst panel
    std::size_t worst = 0;
    double total_err = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total_err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (total_err <= abs_tol) break;
    const Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // cannot split further
    PanelResult left = gk15(f, p.a, mid);
    PanelResult right = gk15(f, mid, p.b);
    evals += 30;
    panels[worst] = {p.a, mid, left.kronrod, left.error};
    panels.push_back({mid, p.b, right.kronrod, right.error});
  }

  double sum = 0.0;
  for (const Panel& p : panels) sum += p.value;
  return sum;
}

}  // namespace depbounds
