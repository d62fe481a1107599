#include "depbounds/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "depbounds/errors.hpp"
#include "depbounds/quadrature.hpp"

namespace depbounds {

namespace {

void check_prob_open(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError(std::string(what) + " requires u in (0,1), got " +
                      std::to_string(u));
  }
}

// Signed power t|t|^beta and its antiderivative |t|^(beta+2)/(beta+2); used
// by the closed-form uniform x uniform moment below.
double abspow(double t, double p) { return std::pow(std::abs(t), p); }

}  // namespace

MarginalDist MarginalDist::uniform(double a, double b) {
  if (!(a < b)) throw DomainError("uniform marginal requires a < b");
  MarginalDist m;
  m.family_ = MarginalFamily::Uniform;
  m.lo_ = a;
  m.hi_ = b;
  return m;
}

MarginalDist MarginalDist::point_mass(double c) {
  MarginalDist m;
  m.family_ = MarginalFamily::PointMass;
  m.lo_ = c;
  m.hi_ = c;
  return m;
}

MarginalDist MarginalDist::empirical(std::vector<double> sample) {
  if (sample.empty()) throw DomainError("empirical marginal needs data");
  std::sort(sample.begin(), sample.end());
  MarginalDist m;
  m.family_ = MarginalFamily::Empirical;
  m.lo_ = sample.front();
  m.hi_ = sample.back();
  m.sample_ = std::move(sample);
  return m;
}

double MarginalDist::quantile(double u) const {
  check_prob_open(u, "quantile");
  return quantile_unchecked(u);
}

double MarginalDist::quantile_unchecked(double u) const {
  switch (family_) {
    case MarginalFamily::Uniform:
      return lo_ + (hi_ - lo_) * u;
    case MarginalFamily::PointMass:
      return lo_;
    case MarginalFamily::Empirical: {
      // left-continuous inverse of the empirical cdf: x_(ceil(u*m))
      const auto m = static_cast<double>(sample_.size());
      auto k = static_cast<std::size_t>(std::ceil(u * m));
      if (k < 1) k = 1;
      if (k > sample_.size()) k = sample_.size();
      return sample_[k - 1];
    }
  }
  return lo_;
}

double MarginalDist::cdf(double x) const {
  switch (family_) {
    case MarginalFamily::Uniform:
      if (x <= lo_) return 0.0;
      if (x >= hi_) return 1.0;
      return (x - lo_) / (hi_ - lo_);
    case MarginalFamily::PointMass:
      return x >= lo_ ? 1.0 : 0.0;
    case MarginalFamily::Empirical: {
      auto it = std::upper_bound(sample_.begin(), sample_.end(), x);
      return static_cast<double>(it - sample_.begin()) /
             static_cast<double>(sample_.size());
    }
  }
  return 0.0;
}

double MarginalDist::cdf_left(double x) const {
  switch (family_) {
    case MarginalFamily::Uniform:
      return cdf(x);
    case MarginalFamily::PointMass:
      return x > lo_ ? 1.0 : 0.0;
    case MarginalFamily::Empirical: {
      auto it = std::lower_bound(sample_.begin(), sample_.end(), x);
      return static_cast<double>(it - sample_.begin()) /
             static_cast<double>(sample_.size());
    }
  }
  return 0.0;
}

double MarginalDist::mean() const {
  switch (family_) {
    case MarginalFamily::Uniform:
      return 0.5 * (lo_ + hi_);
    case MarginalFamily::PointMass:
      return lo_;
    case MarginalFamily::Empirical: {
      double s = 0.0;
      for (double x : sample_) s += x;
      return s / static_cast<double>(sample_.size());
    }
  }
  return 0.0;
}

double MarginalDist::variance() const {
  switch (family_) {
    case MarginalFamily::Uniform: {
      const double w = hi_ - lo_;
      return w * w / 12.0;
    }
    case MarginalFamily::PointMass:
      return 0.0;
    case MarginalFamily::Empirical: {
      const double mu = mean();
      double s = 0.0;
      for (double x : sample_) s += (x - mu) * (x - mu);
      return s / static_cast<double>(sample_.size());
    }
  }
  return 0.0;
}

std::optional<double> MarginalDist::symmetry_center() const {
  switch (family_) {
    case MarginalFamily::Uniform:
    case MarginalFamily::PointMass:
      return 0.5 * (lo_ + hi_);
    case MarginalFamily::Empirical:
      return std::nullopt;
  }
  return std::nullopt;
}

bool MarginalDist::unimodal() const {
  return family_ != MarginalFamily::Empirical;
}

bool MarginalDist::operator==(const MarginalDist& other) const {
  return family_ == other.family_ && lo_ == other.lo_ && hi_ == other.hi_ &&
         sample_ == other.sample_;
}

std::string MarginalDist::describe() const {
  char buf[96];
  switch (family_) {
    case MarginalFamily::Uniform:
      std::snprintf(buf, sizeof(buf), "uniform:%.17g,%.17g", lo_, hi_);
      return buf;
    case MarginalFamily::PointMass:
      std::snprintf(buf, sizeof(buf), "point:%.17g", lo_);
      return buf;
    case MarginalFamily::Empirical:
      std::snprintf(buf, sizeof(buf), "empirical[%zu]", sample_.size());
      return buf;
  }
  return "?";
}

MarginalDist parse_marginal(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw DomainError("marginal spec '" + spec +
                      "' must be uniform:a,b | point:c | empirical:<path>");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  try {
    if (kind == "uniform") {
      const auto comma = rest.find(',');
      if (comma == std::string::npos) {
        throw DomainError("uniform marginal needs two parameters: " + spec);
      }
      const double a = std::stod(rest.substr(0, comma));
      const double b = std::stod(rest.substr(comma + 1));
      return MarginalDist::uniform(a, b);
    }
    if (kind == "point") return MarginalDist::point_mass(std::stod(rest));
    if (kind == "empirical") {
      std::ifstream in(rest);
      if (!in) throw DomainError("cannot open sample file: " + rest);
      std::vector<double> xs;
      double v;
      while (in >> v) xs.push_back(v);
      return MarginalDist::empirical(std::move(xs));
    }
  } catch (const std::invalid_argument&) {
    throw DomainError("bad number in marginal spec: " + spec);
  }
  throw DomainError("unknown marginal family '" + kind + "' in " + spec);
}

// ---------------------------------------------------------------------------
// DiamondDist
// ---------------------------------------------------------------------------

namespace {

// Integral of the uniform(a,b) cdf from -inf to t.
double uniform_cdf_integral(double t, double a, double b) {
  if (t <= a) return 0.0;
  if (t >= b) return t - 0.5 * (a + b);
  return (t - a) * (t - a) / (2.0 * (b - a));
}

double diamond_cdf_impl(const MarginalDist& f, const MarginalDist& g,
                        double x) {
  if (x < 0.0) throw DomainError("diamond cdf requires x >= 0");
  if (f.family() == MarginalFamily::Uniform &&
      g.family() == MarginalFamily::Uniform) {
    const double a2 = g.lo(), b2 = g.hi();
    const double num = uniform_cdf_integral(b2 + x, f.lo(), f.hi()) -
                       uniform_cdf_integral(a2 + x, f.lo(), f.hi()) -
                       uniform_cdf_integral(b2 - x, f.lo(), f.hi()) +
                       uniform_cdf_integral(a2 - x, f.lo(), f.hi());
    return std::clamp(num / (b2 - a2), 0.0, 1.0);
  }
  // At least one side is atomic: sum P(|X - a_j| <= x) over its atoms.
  const bool g_atomic = g.is_atomic();
  const MarginalDist& atom_side = g_atomic ? g : f;
  const MarginalDist& other = g_atomic ? f : g;
  auto interval_prob = [&](double a) {
    return other.cdf(a + x) - other.cdf_left(a - x);
  };
  if (atom_side.family() == MarginalFamily::PointMass) {
    return std::clamp(interval_prob(atom_side.lo()), 0.0, 1.0);
  }
  const auto& pts = atom_side.sample_points();
  double s = 0.0;
  for (double a : pts) s += interval_prob(a);
  return std::clamp(s / static_cast<double>(pts.size()), 0.0, 1.0);
}

}  // namespace

DiamondDist::DiamondDist(MarginalDist f, MarginalDist g)
    : f_(std::move(f)), g_(std::move(g)) {
  zmax_ = std::max(f_.hi() - g_.lo(), g_.hi() - f_.lo());
  if (zmax_ < 0.0) zmax_ = std::abs(f_.lo() - g_.hi());
  zmax_ = std::max(zmax_, 0.0);
}

double DiamondDist::cdf(double x) const { return diamond_cdf_impl(f_, g_, x); }

double DiamondDist::quantile(double u) const {
  check_prob_open(u, "diamond quantile");
  // closed form for identical uniforms: cdf is 2z/L - (z/L)^2
  if (f_.family() == MarginalFamily::Uniform && f_ == g_) {
    return (f_.hi() - f_.lo()) * (1.0 - std::sqrt(1.0 - u));
  }
  // generalized inverse inf{z : cdf(z) >= u} by bisection
  double lo = 0.0, hi = std::max(zmax_, 1e-300);
  if (cdf(hi) < u) return hi;  // u == 1 edge, cannot happen for u < 1
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, zmax_);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= u) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double diamond_cdf(const MarginalDist& f, const MarginalDist& g, double x) {
  return diamond_cdf_impl(f, g, x);
}

double diamond_quantile(const MarginalDist& f, const MarginalDist& g,
                        double u) {
  return DiamondDist(f, g).quantile(u);
}

// ---------------------------------------------------------------------------
// Gini mean difference
// ---------------------------------------------------------------------------

namespace {

void check_beta_gini(double beta) {
  if (!(beta > 0.0 && beta <= 2.0)) {
    throw DomainError("gini_m requires beta in (0,2], got " +
                      std::to_string(beta));
  }
}

// E|U - c|^beta for U ~ uniform(a,b); exact for any c.
double uniform_point_moment(double a, double b, double c, double beta) {
  const double p = beta + 1.0;
  auto prim = [&](double t) {
    return (t >= 0 ? 1.0 : -1.0) * abspow(t, p) / p;
  };
  return (prim(b - c) - prim(a - c)) / (b - a);
}

// E|X-Y|^beta for X ~ uniform(a1,b1), Y ~ uniform(a2,b2); exact for any
// parameters via the double antiderivative of |t|^beta.
double uniform_uniform_moment(double a1, double b1, double a2, double b2,
                              double beta) {
  const double p2 = beta + 2.0;
  const double num = abspow(b1 - a2, p2) - abspow(a1 - a2, p2) +
                     abspow(b2 - a1, p2) - abspow(b2 - b1, p2);
  return num / ((beta + 1.0) * p2 * (b1 - a1) * (b2 - a2));
}

double atom_moment(const MarginalDist& other, double a, double beta) {
  switch (other.family()) {
    case MarginalFamily::Uniform:
      return uniform_point_moment(other.lo(), other.hi(), a, beta);
    case MarginalFamily::PointMass:
      return abspow(other.lo() - a, beta);
    case MarginalFamily::Empirical: {
      double s = 0.0;
      for (double x : other.sample_points()) s += abspow(x - a, beta);
      return s / static_cast<double>(other.sample_points().size());
    }
  }
  return 0.0;
}

}  // namespace

double gini_m(const MarginalDist& f, const MarginalDist& g, double beta) {
  check_beta_gini(beta);
  if (beta == 2.0) return m2_cross(f, g);
  if (f.family() == MarginalFamily::Uniform &&
      g.family() == MarginalFamily::Uniform) {
    return uniform_uniform_moment(f.lo(), f.hi(), g.lo(), g.hi(), beta);
  }
  const bool g_atomic = g.is_atomic();
  const MarginalDist& atom_side = g_atomic ? g : f;
  const MarginalDist& other = g_atomic ? f : g;
  if (atom_side.family() == MarginalFamily::PointMass) {
    return atom_moment(other, atom_side.lo(), beta);
  }
  const auto& pts = atom_side.sample_points();
  double s = 0.0;
  for (double a : pts) s += atom_moment(other, a, beta);
  return s / static_cast<double>(pts.size());
}

double gini_m_quadrature(const MarginalDist& f, const MarginalDist& g,
                         double beta, double abs_tol) {
  check_beta_gini(beta);
  DiamondDist dia(f, g);
  return integrate_adaptive(
      [&](double u) { return std::pow(dia.quantile(u), beta); }, 1e-12,
      1.0 - 1e-12, abs_tol);
}

double m2_cross(const MarginalDist& f, const MarginalDist& g) {
  for (const MarginalDist* m : {&f, &g}) {
    if (m->family() == MarginalFamily::Empirical &&
        m->sample_points().size() < 2) {
      throw DomainError("m2_cross: empirical marginal with fewer than 2 points");
    }
  }
  const double dm = f.mean() - g.mean();
  return f.variance() + g.variance() + dm * dm;
}

}  // namespace depbounds
