#include "depbounds/pieces.hpp"

#include <algorithm>
#include <cmath>

#include "depbounds/errors.hpp"
#include "depbounds/quadrature.hpp"

namespace depbounds {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> sub(const std::vector<double>& a,
                        const std::vector<double>& b) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

double powb(double s2, double beta) {
  // s2 = squared distance
  if (beta == 1.0) return std::sqrt(s2);
  if (beta == 2.0) return s2;
  return std::pow(s2, 0.5 * beta);
}

// sgn(t)|t|^p
double signed_pow(double t, double p) {
  const double a = std::pow(std::abs(t), p);
  return t >= 0 ? a : -a;
}

constexpr double kParallelTol = 1e-12;
constexpr double kOnLineTol = 1e-9;

// ---------------------------------------------------------------------------
// dim (0,0), (0,1)
// ---------------------------------------------------------------------------

double point_point(const SupportPiece& a, const SupportPiece& b, double beta) {
  return powb(dot(sub(a.origin, b.origin), sub(a.origin, b.origin)), beta);
}

// integral over t in [lo,hi] of (alpha + gamma t) * |t - t0|^beta (exact)
double linear_times_power(double lo, double hi, double alpha, double gamma,
                          double t0, double beta) {
  auto prim = [&](double t) {
    const double s = t - t0;
    return (alpha + gamma * t0) * signed_pow(s, beta + 1.0) / (beta + 1.0) +
           gamma * std::pow(std::abs(s), beta + 2.0) / (beta + 2.0);
  };
  return prim(hi) - prim(lo);
}

// mean over u in [0,1] of ||c + u r||^beta with optional split at the
// distance minimum; exact power formula when the point lies on the line.
double line_point(const SupportPiece& line, const SupportPiece& pt,
                  double beta, int order) {
  const std::vector<double> c = sub(line.origin, pt.origin);
  const double rr = dot(line.dir1, line.dir1);
  const double cc = dot(c, c);
  const double cr = dot(c, line.dir1);
  const double t0 = -cr / rr;
  const double perp2 = std::max(0.0, cc - cr * cr / rr);
  const double scale2 = std::max(rr, std::max(cc, 1e-300));
  if (perp2 <= kOnLineTol * kOnLineTol * scale2) {
    return std::pow(rr, 0.5 * beta) *
           linear_times_power(0.0, 1.0, 1.0, 0.0, t0, beta);
  }
  auto h = [&](double t) { return powb(cc + 2.0 * t * cr + t * t * rr, beta); };
  if (t0 > 0.0 && t0 < 1.0) {
    return integrate_gl(h, 0.0, t0, order) + integrate_gl(h, t0, 1.0, order);
  }
  return integrate_gl(h, 0.0, 1.0, order);
}

// ---------------------------------------------------------------------------
// dim (1,1)
// ---------------------------------------------------------------------------

// Lines with dir_b = lambda * dir_a, 0 < lambda <= 1 after normalization.
// With W = u - lambda v the integral becomes a 1-d integral of
// ||c + w dir_a||^beta against the trapezoidal density of W.
double parallel_lines(const std::vector<double>& c,
                      const std::vector<double>& r, double lambda, double beta,
                      int order) {
  const double rr = dot(r, r);
  const double cc = dot(c, c);
  const double cr = dot(c, r);
  const double t0 = -cr / rr;
  const double perp2 = std::max(0.0, cc - cr * cr / rr);
  const double scale2 = std::max(rr, std::max(cc, 1e-300));
  const bool overlapping = perp2 <= kOnLineTol * kOnLineTol * scale2;

  struct Seg {
    double lo, hi, alpha, gamma;
  };
  const Seg segs[3] = {
      {-lambda, 0.0, 1.0, 1.0 / lambda},
      {0.0, 1.0 - lambda, 1.0, 0.0},
      {1.0 - lambda, 1.0, 1.0 / lambda, -1.0 / lambda},
  };

  double total = 0.0;
  for (const Seg& s : segs) {
    if (s.hi - s.lo <= 0.0) continue;
    if (overlapping) {
      total += std::pow(rr, 0.5 * beta) *
               linear_times_power(s.lo, s.hi, s.alpha, s.gamma, t0, beta);
      continue;
    }
    auto f = [&](double w) {
      return (s.alpha + s.gamma * w) * powb(cc + 2.0 * w * cr + w * w * rr,
                                            beta);
    };
    if (t0 > s.lo && t0 < s.hi) {
      total += integrate_gl(f, s.lo, t0, order);
      total += integrate_gl(f, t0, s.hi, order);
    } else {
      total += integrate_gl(f, s.lo, s.hi, order);
    }
  }
  return total;
}

// Rectangle [0,A]x[0,B] of the difference a*u - b*v for non-parallel u, v,
// with the singularity at the (0,0) corner. The radial direction integrates
// in closed form (the integrand is homogeneous), leaving two smooth 1-d
// integrals over the diagonal split.
double duffy_rect(double A, double B, const std::vector<double>& u,
                  const std::vector<double>& v, double beta, int order) {
  if (A <= 0.0 || B <= 0.0) return 0.0;
  const double ratio1 = B / A;
  const double ratio2 = A / B;
  auto g1 = [&](double tau) {
    double s2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double e = u[i] - ratio1 * tau * v[i];
      s2 += e * e;
    }
    return powb(s2, beta);
  };
  auto g2 = [&](double tau) {
    double s2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double e = ratio2 * tau * u[i] - v[i];
      s2 += e * e;
    }
    return powb(s2, beta);
  };
  const double radial1 = ratio1 * std::pow(A, beta + 2.0) / (beta + 2.0);
  const double radial2 = ratio2 * std::pow(B, beta + 2.0) / (beta + 2.0);
  return radial1 * integrate_gl(g1, 0.0, 1.0, order) +
         radial2 * integrate_gl(g2, 0.0, 1.0, order);
}

double tensor_gl_2d(const std::function<double(double, double)>& f, double ua,
                    double ub, double va, double vb, int order) {
  if (ub - ua <= 0.0 || vb - va <= 0.0) return 0.0;
  const GaussRule& rule = gauss_legendre(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double u = ua + (ub - ua) * rule.x[i];
    double row = 0.0;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      row += rule.w[j] * f(u, va + (vb - va) * rule.x[j]);
    }
    sum += rule.w[i] * row;
  }
  return (ub - ua) * (vb - va) * sum;
}

// Generic two-direction handler used for crossing lines and point-in-box:
// integrates ||c0 + s dir_u - t dir_v||^beta over [0,1]^2 with the critical
// point split off; when the minimum distance vanishes the four corner
// rectangles are integrated with the exact radial reduction.
double two_direction_integral(const std::vector<double>& c0,
                              const std::vector<double>& du,
                              const std::vector<double>& dv, double beta,
                              int order) {
  const double uu = dot(du, du), vv = dot(dv, dv), uv = dot(du, dv);
  const double cu = dot(c0, du), cv = dot(c0, dv);
  const double det = -(uu * vv - uv * uv);
  // critical point of the squared distance:
  //   uu*u - uv*v = -cu ; uv*u - vv*v = -cv
  const double us = (cu * vv - uv * cv) / det;
  const double vs = (cu * uv - uu * cv) / det;
  double d2 = 0.0;
  for (std::size_t i = 0; i < c0.size(); ++i) {
    const double e = c0[i] + us * du[i] - vs * dv[i];
    d2 += e * e;
  }
  const double scale2 = std::max({uu, vv, dot(c0, c0), 1e-300});
  const bool inside =
      us > -1e-9 && us < 1.0 + 1e-9 && vs > -1e-9 && vs < 1.0 + 1e-9;
  const double ucl = std::clamp(us, 0.0, 1.0);
  const double vcl = std::clamp(vs, 0.0, 1.0);

  if (inside && d2 <= 1e-18 * scale2) {
    // support touches: split at the contact point, negate directions so
    // every sub-rectangle sees the singularity at its (0,0) corner
    double total = 0.0;
    const double spans_u[2][2] = {{ucl, -1.0}, {1.0 - ucl, +1.0}};
    const double spans_v[2][2] = {{vcl, -1.0}, {1.0 - vcl, +1.0}};
    std::vector<double> su(du.size()), sv(dv.size());
    for (const auto& [A, sgnu] : spans_u) {
      for (const auto& [B, sgnv] : spans_v) {
        for (std::size_t i = 0; i < du.size(); ++i) {
          su[i] = sgnu * du[i];
          sv[i] = sgnv * dv[i];
        }
        total += duffy_rect(A, B, su, sv, beta, order);
      }
    }
    return total;
  }

  auto f = [&](double s, double t) {
    double e2 = 0.0;
    for (std::size_t i = 0; i < c0.size(); ++i) {
      const double e = c0[i] + s * du[i] - t * dv[i];
      e2 += e * e;
    }
    return powb(e2, beta);
  };
  double total = 0.0;
  const double ub[3] = {0.0, ucl, 1.0};
  const double vb[3] = {0.0, vcl, 1.0};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      total += tensor_gl_2d(f, ub[i], ub[i + 1], vb[j], vb[j + 1], order);
    }
  }
  return total;
}

double line_line(const SupportPiece& a, const SupportPiece& b, double beta,
                 int order) {
  std::vector<double> ra = a.dir1;
  std::vector<double> rb = b.dir1;
  std::vector<double> oa = a.origin;
  std::vector<double> ob = b.origin;
  const double raa = dot(ra, ra), rbb = dot(rb, rb), rab = dot(ra, rb);
  const double gram = raa * rbb - rab * rab;
  if (gram > kParallelTol * raa * rbb) {
    return two_direction_integral(sub(oa, ob), ra, rb, beta, order);
  }
  // parallel: orient and order so dir_b = lambda dir_a with 0 < lambda <= 1
  double lambda = rab / raa;
  if (lambda < 0.0) {
    for (std::size_t i = 0; i < ob.size(); ++i) ob[i] += rb[i];
    for (double& x : rb) x = -x;
    lambda = -lambda;
  }
  if (lambda > 1.0) {
    std::swap(oa, ob);
    std::swap(ra, rb);
    lambda = dot(ra, rb) / dot(ra, ra);
  }
  return parallel_lines(sub(oa, ob), ra, lambda, beta, order);
}

// ---------------------------------------------------------------------------
// boxes
// ---------------------------------------------------------------------------

double box_point(const SupportPiece& box, const SupportPiece& pt, double beta,
                 int order) {
  std::vector<double> negdir2(box.dir2.size());
  for (std::size_t i = 0; i < box.dir2.size(); ++i) negdir2[i] = -box.dir2[i];
  // c + a e1 + b e2 == c + a e1 - b (-e2)
  return two_direction_integral(sub(box.origin, pt.origin), box.dir1, negdir2,
                                beta, order);
}

double line_box(const SupportPiece& line, const SupportPiece& box, double beta,
                int order) {
  const GaussRule& rule = gauss_legendre(order);
  const std::size_t m = rule.x.size();
  const std::size_t d = line.origin.size();
  double sum = 0.0;
  std::vector<double> base(d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      base[k] = line.origin[k] + rule.x[i] * line.dir1[k] - box.origin[k];
    }
    double plane = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double row = 0.0;
      for (std::size_t l = 0; l < m; ++l) {
        double e2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          const double e =
              base[k] - rule.x[j] * box.dir1[k] - rule.x[l] * box.dir2[k];
          e2 += e * e;
        }
        row += rule.w[l] * powb(e2, beta);
      }
      plane += rule.w[j] * row;
    }
    sum += rule.w[i] * plane;
  }
  return sum;
}

bool same_box(const SupportPiece& a, const SupportPiece& b) {
  auto close = [](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i] - y[i]) > 1e-12) return false;
    }
    return true;
  };
  return close(a.origin, b.origin) &&
         ((close(a.dir1, b.dir1) && close(a.dir2, b.dir2)) ||
          (close(a.dir1, b.dir2) && close(a.dir2, b.dir1)));
}

// Identical axis boxes: the difference per axis is triangular, leaving a 2-d
// integral with the origin singularity; Duffy triangles make it smooth.
double box_box_same(const SupportPiece& a, double beta, int order) {
  const double s1 = std::sqrt(dot(a.dir1, a.dir1));
  const double s2 = std::sqrt(dot(a.dir2, a.dir2));
  auto t1_integrand = [&](double t, double tau) {
    return std::pow(t, beta + 1.0) *
           powb(s1 * s1 + s2 * s2 * tau * tau, beta) * (1.0 - t) *
           (1.0 - t * tau);
  };
  auto t2_integrand = [&](double t, double tau) {
    return std::pow(t, beta + 1.0) *
           powb(s1 * s1 * tau * tau + s2 * s2, beta) * (1.0 - t * tau) *
           (1.0 - t);
  };
  const double part1 = tensor_gl_2d(t1_integrand, 0, 1, 0, 1, order);
  const double part2 = tensor_gl_2d(t2_integrand, 0, 1, 0, 1, order);
  return 4.0 * (part1 + part2);
}

double box_box(const SupportPiece& a, const SupportPiece& b, double beta,
               int order) {
  if (same_box(a, b)) return box_box_same(a, beta, order);
  const int ord = std::min(order, 24);
  const GaussRule& rule = gauss_legendre(ord);
  const std::size_t m = rule.x.size();
  const std::size_t d = a.origin.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
          double e2 = 0.0;
          for (std::size_t c = 0; c < d; ++c) {
            const double e = a.origin[c] + rule.x[i] * a.dir1[c] +
                             rule.x[j] * a.dir2[c] - b.origin[c] -
                             rule.x[k] * b.dir1[c] - rule.x[l] * b.dir2[c];
            e2 += e * e;
          }
          sum += rule.w[i] * rule.w[j] * rule.w[k] * rule.w[l] *
                 powb(e2, beta);
        }
      }
    }
  }
  return sum;
}

void reduce_dims(SupportPiece& p) {
  auto norm2 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  };
  if (p.param_dim == 2 && norm2(p.dir2) < 1e-28) p.param_dim = 1;
  if (p.param_dim == 2 && norm2(p.dir1) < 1e-28) {
    p.dir1 = p.dir2;
    p.param_dim = 1;
  }
  if (p.param_dim == 1 && norm2(p.dir1) < 1e-28) p.param_dim = 0;
  if (p.param_dim < 2) p.dir2.assign(p.origin.size(), 0.0);
  if (p.param_dim < 1) p.dir1.assign(p.origin.size(), 0.0);
}

}  // namespace

std::optional<std::vector<SupportPiece>> decompose(const JointDist& dist) {
  const int d = dist.dim();
  for (const MarginalDist& m : dist.marginals) {
    if (m.family() == MarginalFamily::Empirical) return std::nullopt;
  }
  bool all_points = true;
  for (const MarginalDist& m : dist.marginals) {
    if (m.family() != MarginalFamily::PointMass) all_points = false;
  }

  // pieces in copula space
  std::vector<SupportPiece> pieces;
  auto line = [&](std::vector<double> o, std::vector<double> r, double w) {
    SupportPiece p;
    p.weight = w;
    p.param_dim = 1;
    p.origin = std::move(o);
    p.dir1 = std::move(r);
    p.dir2.assign(d, 0.0);
    pieces.push_back(std::move(p));
  };
  if (all_points) {
    SupportPiece p;
    p.param_dim = 0;
    p.origin.assign(d, 0.0);
    p.dir1.assign(d, 0.0);
    p.dir2.assign(d, 0.0);
    pieces.push_back(std::move(p));
  } else {
    switch (dist.copula.kind()) {
      case CopulaKind::Comonotone:
        line(std::vector<double>(d, 0.0), std::vector<double>(d, 1.0), 1.0);
        break;
      case CopulaKind::Countermonotone:
        line({0.0, 1.0}, {1.0, -1.0}, 1.0);
        break;
      case CopulaKind::Parallel:
        line({0.0, 0.5}, {0.5, 0.5}, 0.5);
        line({0.5, 0.0}, {0.5, 0.5}, 0.5);
        break;
      case CopulaKind::Hat: {
        line({0.0, 0.0}, {0.5, 0.5}, 0.5);
        SupportPiece box;
        box.weight = 0.5;
        box.param_dim = 2;
        box.origin = {0.5, 0.5};
        box.dir1 = {0.5, 0.0};
        box.dir2 = {0.0, 0.5};
        pieces.push_back(std::move(box));
        break;
      }
      default:
        return std::nullopt;
    }
  }

  // apply the affine marginal quantiles coordinatewise
  for (SupportPiece& p : pieces) {
    for (int i = 0; i < d; ++i) {
      const MarginalDist& m = dist.marginals[i];
      if (m.family() == MarginalFamily::Uniform) {
        const double scale = m.hi() - m.lo();
        p.origin[i] = m.lo() + scale * p.origin[i];
        p.dir1[i] *= scale;
        p.dir2[i] *= scale;
      } else {
        p.origin[i] = m.lo();
        p.dir1[i] = 0.0;
        p.dir2[i] = 0.0;
      }
    }
    reduce_dims(p);
  }
  return pieces;
}

double piece_pair_integral(const SupportPiece& a, const SupportPiece& b,
                           double beta, int order) {
  const SupportPiece& lo = a.param_dim <= b.param_dim ? a : b;
  const SupportPiece& hi = a.param_dim <= b.param_dim ? b : a;
  switch (lo.param_dim * 4 + hi.param_dim) {
    case 0:  // (0,0)
      return point_point(lo, hi, beta);
    case 1:  // (0,1)
      return line_point(hi, lo, beta, order);
    case 2:  // (0,2)
      return box_point(hi, lo, beta, order);
    case 5:  // (1,1)
      return line_line(lo, hi, beta, order);
    case 6:  // (1,2)
      return line_box(lo, hi, beta, order);
    case 10:  // (2,2)
      return box_box(lo, hi, beta, order);
  }
  throw IntegrityError("unexpected piece dimensions");
}

double s_beta_pieces(const std::vector<SupportPiece>& fa,
                     const std::vector<SupportPiece>& fb, double beta,
                     int order) {
  double total = 0.0;
  for (const SupportPiece& a : fa) {
    for (const SupportPiece& b : fb) {
      total += a.weight * b.weight * piece_pair_integral(a, b, beta, order);
    }
  }
  return total;
}

}  // namespace depbounds
