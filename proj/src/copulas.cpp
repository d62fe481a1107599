#include "depbounds/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "depbounds/errors.hpp"

namespace depbounds {

namespace {
constexpr double kMergeTol = 1e-12;
constexpr double kWeightTol = 1e-12;
constexpr double kGridTol = 1e-9;

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kMergeTol) return true;
    if (a[i] > b[i] + kMergeTol) return false;
  }
  return false;
}

bool points_close(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kMergeTol) return false;
  }
  return true;
}
}  // namespace

std::string copula_kind_name(CopulaKind kind) {
  switch (kind) {
    case CopulaKind::Comonotone: return "comonotone";
    case CopulaKind::Countermonotone: return "countermonotone";
    case CopulaKind::Independence: return "independence";
    case CopulaKind::Parallel: return "parallel";
    case CopulaKind::Spherical: return "spherical";
    case CopulaKind::Hat: return "hat";
    case CopulaKind::Discrete: return "discrete";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// DiscreteCopula
// ---------------------------------------------------------------------------

DiscreteCopula::DiscreteCopula(int n, int d,
                               std::vector<std::vector<double>> points,
                               std::vector<double> weights)
    : n_(n), d_(d), points_(std::move(points)), weights_(std::move(weights)) {
  canonicalize();
  validate();
}

DiscreteCopula DiscreteCopula::from_permutations(
    int n, std::vector<std::vector<int>> perms) {
  if (n < 1) throw DomainError("grid order must be >= 1");
  const int d = static_cast<int>(perms.size()) + 1;
  std::vector<std::vector<double>> pts(n, std::vector<double>(d));
  for (int i = 0; i < n; ++i) {
    pts[i][0] = (i + 0.5) / n;
    for (int k = 1; k < d; ++k) {
      const auto& sigma = perms[k - 1];
      if (static_cast<int>(sigma.size()) != n) {
        throw DomainError("permutation length mismatch");
      }
      pts[i][k] = (sigma[i] + 0.5) / n;
    }
  }
  DiscreteCopula dc(n, d, std::move(pts),
                    std::vector<double>(n, 1.0 / n));
  dc.perms_ = std::move(perms);
  return dc;
}

void DiscreteCopula::canonicalize() {
  if (points_.size() != weights_.size()) {
    throw DomainError("support/weight size mismatch");
  }
  std::vector<std::size_t> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(points_[a], points_[b]);
  });
  std::vector<std::vector<double>> pts;
  std::vector<double> ws;
  pts.reserve(points_.size());
  ws.reserve(points_.size());
  for (std::size_t i : idx) {
    if (!pts.empty() && points_close(pts.back(), points_[i])) {
      ws.back() += weights_[i];
    } else {
      pts.push_back(points_[i]);
      ws.push_back(weights_[i]);
    }
  }
  points_ = std::move(pts);
  weights_ = std::move(ws);
}

void DiscreteCopula::validate() const {
  if (n_ < 1 || d_ < 1) throw DomainError("discrete copula needs n,d >= 1");
  if (points_.empty()) throw DomainError("discrete copula has empty support");
  double total = 0.0;
  // weight of each grid level, per coordinate
  std::vector<std::vector<double>> level(d_, std::vector<double>(n_, 0.0));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<int>(points_[i].size()) != d_) {
      throw DomainError("support point dimension mismatch");
    }
    if (!(weights_[i] > 0.0)) {
      throw DomainError("support weights must be positive");
    }
    total += weights_[i];
    for (int k = 0; k < d_; ++k) {
      const double u = points_[i][k];
      const double level_real = u * n_ - 0.5;
      const int lv = static_cast<int>(std::lround(level_real));
      if (lv < 0 || lv >= n_ ||
          std::abs(level_real - lv) > kGridTol * n_) {
        throw DomainError("support point off the cell-center grid");
      }
      level[k][lv] += weights_[i];
    }
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw DomainError("support weights must sum to 1");
  }
  for (int k = 0; k < d_; ++k) {
    for (int lv = 0; lv < n_; ++lv) {
      if (std::abs(level[k][lv] - 1.0 / n_) > 1e-9) {
        throw DomainError("marginal is not discrete-uniform on the grid");
      }
    }
  }
}

bool DiscreteCopula::operator==(const DiscreteCopula& other) const {
  if (n_ != other.n_ || d_ != other.d_ ||
      points_.size() != other.points_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_close(points_[i], other.points_[i])) return false;
    if (std::abs(weights_[i] - other.weights_[i]) > 1e-9) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Copula
// ---------------------------------------------------------------------------

Copula Copula::comonotone(int d) {
  if (d < 1) throw DomainError("comonotone copula needs d >= 1");
  return Copula(CopulaKind::Comonotone, d);
}

Copula Copula::countermonotone() {
  return Copula(CopulaKind::Countermonotone, 2);
}

Copula Copula::independence(int d) {
  if (d < 1) throw DomainError("independence copula needs d >= 1");
  return Copula(CopulaKind::Independence, d);
}

Copula Copula::parallel() { return Copula(CopulaKind::Parallel, 2); }

Copula Copula::spherical(int d) {
  if (d != 2 && d != 3) {
    throw DomainError("spherical copulas exist only for d in {2,3}");
  }
  return Copula(CopulaKind::Spherical, d);
}

Copula Copula::hat() { return Copula(CopulaKind::Hat, 2); }

Copula Copula::discrete(DiscreteCopula dc) {
  Copula c(CopulaKind::Discrete, dc.dim());
  c.cum_weights_.reserve(dc.weights().size());
  double acc = 0.0;
  for (double w : dc.weights()) {
    acc += w;
    c.cum_weights_.push_back(acc);
  }
  c.cum_weights_.back() = 1.0;
  c.discrete_ = std::move(dc);
  return c;
}

const DiscreteCopula& Copula::discrete_data() const {
  if (!discrete_) throw DomainError("copula is not discrete");
  return *discrete_;
}

int Copula::draws_per_sample() const {
  switch (kind_) {
    case CopulaKind::Comonotone:
    case CopulaKind::Countermonotone:
    case CopulaKind::Parallel:
    case CopulaKind::Discrete:
      return 1;
    case CopulaKind::Spherical:
    case CopulaKind::Hat:
      return 2;
    case CopulaKind::Independence:
      return d_;
  }
  return 1;
}

void Copula::sample_point(double* out, Rng& rng) const {
  switch (kind_) {
    case CopulaKind::Comonotone: {
      const double u = rng.uniform();
      for (int i = 0; i < d_; ++i) out[i] = u;
      return;
    }
    case CopulaKind::Countermonotone: {
      const double u = rng.uniform();
      out[0] = u;
      out[1] = 1.0 - u;
      return;
    }
    case CopulaKind::Independence: {
      for (int i = 0; i < d_; ++i) out[i] = rng.uniform();
      return;
    }
    case CopulaKind::Parallel: {
      const double u = rng.uniform();
      out[0] = u;
      out[1] = u <= 0.5 ? u + 0.5 : u - 0.5;
      return;
    }
    case CopulaKind::Hat: {
      const double u = rng.uniform();
      const double v = rng.uniform();  // always drawn, for stream stability
      out[0] = u;
      out[1] = u <= 0.5 ? u : 0.5 * (v + 1.0);
      return;
    }
    case CopulaKind::Spherical: {
      // Archimedes: height uniform on [-1,1], angle uniform; every
      // coordinate of a uniform point on the sphere is uniform on [-1,1].
      const double z = 2.0 * rng.uniform() - 1.0;
      const double phi = 2.0 * std::numbers::pi * rng.uniform();
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double x = r * std::cos(phi);
      const double y = r * std::sin(phi);
      out[0] = 0.5 * (x + 1.0);
      out[1] = 0.5 * (y + 1.0);
      if (d_ == 3) out[2] = 0.5 * (z + 1.0);
      return;
    }
    case CopulaKind::Discrete: {
      const double u = rng.uniform();
      const auto it =
          std::lower_bound(cum_weights_.begin(), cum_weights_.end(), u);
      const std::size_t idx = static_cast<std::size_t>(
          std::min<std::ptrdiff_t>(it - cum_weights_.begin(),
                                   static_cast<std::ptrdiff_t>(
                                       cum_weights_.size() - 1)));
      const auto& p = discrete_->points()[idx];
      for (int i = 0; i < d_; ++i) out[i] = p[i];
      return;
    }
  }
}

bool Copula::operator==(const Copula& other) const {
  if (kind_ != other.kind_ || d_ != other.d_) return false;
  if (kind_ == CopulaKind::Discrete) return *discrete_ == *other.discrete_;
  return true;
}

// ---------------------------------------------------------------------------
// JointDist and sampling
// ---------------------------------------------------------------------------

JointDist::JointDist(Copula c, std::vector<MarginalDist> m)
    : copula(std::move(c)), marginals(std::move(m)) {
  if (static_cast<int>(marginals.size()) != copula.dim()) {
    throw DomainError("marginal count must equal copula dimension");
  }
}

bool JointDist::operator==(const JointDist& other) const {
  return copula == other.copula && marginals == other.marginals;
}

JointDist with_uniform_marginals(Copula c) {
  std::vector<MarginalDist> ms(c.dim(), MarginalDist::uniform(0.0, 1.0));
  return JointDist(std::move(c), std::move(ms));
}

std::vector<std::vector<double>> sample(const JointDist& dist, long long count,
                                        std::uint64_t seed, int workers) {
  if (count < 1) throw DomainError("sample count must be >= 1");
  if (workers < 1) throw DomainError("worker count must be >= 1");
  const int d = dist.dim();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(count),
                                       std::vector<double>(d));
  auto run_chunk = [&](int w) {
    const long long lo = count * w / workers;
    const long long hi = count * (w + 1) / workers;
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(w));
    std::vector<double> u(d);
    for (long long i = lo; i < hi; ++i) {
      dist.copula.sample_point(u.data(), rng);
      for (int k = 0; k < d; ++k) {
        out[static_cast<std::size_t>(i)][k] =
            dist.marginals[k].quantile_unchecked(u[k]);
      }
    }
  };
  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(run_chunk, w);
    for (auto& t : threads) t.join();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Discretization, symmetries, mixtures
// ---------------------------------------------------------------------------

DiscreteCopula discretize(const Copula& c, int n) {
  if (n < 2) throw DomainError("discretize needs n >= 2");
  const int d = c.dim();
  switch (c.kind()) {
    case CopulaKind::Comonotone: {
      std::vector<int> id(n);
      std::iota(id.begin(), id.end(), 0);
      return DiscreteCopula::from_permutations(
          n, std::vector<std::vector<int>>(d - 1, id));
    }
    case CopulaKind::Countermonotone: {
      std::vector<int> rev(n);
      for (int i = 0; i < n; ++i) rev[i] = n - 1 - i;
      return DiscreteCopula::from_permutations(n, {rev});
    }
    case CopulaKind::Parallel: {
      if (n % 2 != 0) throw DomainError("parallel copula needs even n");
      std::vector<int> shift(n);
      for (int i = 0; i < n; ++i) shift[i] = (i + n / 2) % n;
      return DiscreteCopula::from_permutations(n, {shift});
    }
    case CopulaKind::Independence: {
      std::vector<std::vector<double>> pts;
      std::vector<double> ws;
      const auto total = static_cast<std::size_t>(std::pow(n, d));
      pts.reserve(total);
      std::vector<int> idx(d, 0);
      while (true) {
        std::vector<double> p(d);
        for (int k = 0; k < d; ++k) p[k] = (idx[k] + 0.5) / n;
        pts.push_back(std::move(p));
        ws.push_back(std::pow(1.0 / n, d));
        int k = d - 1;
        while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
        if (k < 0) break;
      }
      return DiscreteCopula(n, d, std::move(pts), std::move(ws));
    }
    case CopulaKind::Spherical:
    case CopulaKind::Hat:
    case CopulaKind::Discrete:
      throw CapabilityError("discretize does not support " +
                            copula_kind_name(c.kind()) +
                            "; use sample-based estimates instead");
  }
  throw CapabilityError("unreachable");
}

std::vector<SymmetryElement> hyperoctahedral_group(int d) {
  std::vector<int> base(d);
  std::iota(base.begin(), base.end(), 0);
  std::vector<SymmetryElement> group;
  std::vector<int> perm = base;
  do {
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      SymmetryElement t;
      t.perm = perm;
      t.reflect.resize(d);
      for (int i = 0; i < d; ++i) t.reflect[i] = (mask >> i) & 1u;
      group.push_back(std::move(t));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

DiscreteCopula apply_symmetry(const DiscreteCopula& c,
                              const SymmetryElement& t) {
  const int d = c.dim();
  if (static_cast<int>(t.perm.size()) != d ||
      static_cast<int>(t.reflect.size()) != d) {
    throw DomainError("symmetry element dimension mismatch");
  }
  std::vector<std::vector<double>> pts;
  pts.reserve(c.support_size());
  for (const auto& p : c.points()) {
    std::vector<double> q(d);
    for (int i = 0; i < d; ++i) {
      const double v = p[t.perm[i]];
      q[i] = t.reflect[i] ? 1.0 - v : v;
    }
    pts.push_back(std::move(q));
  }
  return DiscreteCopula(c.grid_order(), d, std::move(pts),
                        c.weights());
}

DiscreteCopula symmetrize(const DiscreteCopula& c) {
  if (c.dim() > 3) {
    throw DomainError("symmetrize supports d <= 3 (group size 2^d d!)");
  }
  const auto group = hyperoctahedral_group(c.dim());
  std::vector<std::pair<DiscreteCopula, double>> parts;
  parts.reserve(group.size());
  const double w = 1.0 / static_cast<double>(group.size());
  for (const auto& t : group) parts.emplace_back(apply_symmetry(c, t), w);
  return mix(parts);
}

DiscreteCopula mix(
    const std::vector<std::pair<DiscreteCopula, double>>& parts) {
  if (parts.empty()) throw DomainError("mix needs at least one component");
  const int n = parts.front().first.grid_order();
  const int d = parts.front().first.dim();
  double total = 0.0;
  std::vector<std::vector<double>> pts;
  std::vector<double> ws;
  for (const auto& [dc, alpha] : parts) {
    if (dc.grid_order() != n || dc.dim() != d) {
      throw DomainError("mix requires matching grid order and dimension");
    }
    if (!(alpha > 0.0)) throw DomainError("mix weights must be positive");
    total += alpha;
    for (std::size_t i = 0; i < dc.support_size(); ++i) {
      pts.push_back(dc.points()[i]);
      ws.push_back(alpha * dc.weights()[i]);
    }
  }
  if (std::abs(total - 1.0) > kWeightTol) {
    throw DomainError("mix weights must sum to 1");
  }
  return DiscreteCopula(n, d, std::move(pts), std::move(ws));
}

// ---------------------------------------------------------------------------
// Parsing and text format
// ---------------------------------------------------------------------------

Copula parse_copula(const std::string& spec, int d) {
  if (spec == "comonotone") return Copula::comonotone(d);
  if (spec == "countermonotone") {
    if (d != 2) throw DomainError("countermonotone copula requires d = 2");
    return Copula::countermonotone();
  }
  if (spec == "independence") return Copula::independence(d);
  if (spec == "parallel") {
    if (d != 2) throw DomainError("parallel copula requires d = 2");
    return Copula::parallel();
  }
  if (spec == "spherical") return Copula::spherical(d);
  if (spec == "hat") {
    if (d != 2) throw DomainError("hat copula requires d = 2");
    return Copula::hat();
  }
  if (spec.rfind("file:", 0) == 0) {
    DiscreteCopula dc = read_discrete_copula_file(spec.substr(5));
    if (dc.dim() != d) {
      throw DomainError("copula file has dimension " +
                        std::to_string(dc.dim()) + ", expected " +
                        std::to_string(d));
    }
    return Copula::discrete(std::move(dc));
  }
  throw DomainError(
      "unknown copula '" + spec +
      "' (expected comonotone | countermonotone | independence | parallel | "
      "spherical | hat | file:<path>)");
}

DiscreteCopula read_discrete_copula(std::istream& in) {
  int n = 0, d = 0;
  long long k = 0;
  if (!(in >> n >> d >> k) || k < 1) {
    throw DomainError("bad discrete copula header (want: n d k)");
  }
  std::vector<std::vector<double>> pts;
  std::vector<double> ws;
  pts.reserve(static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i) {
    std::vector<double> p(d);
    double w = 0.0;
    for (int j = 0; j < d; ++j) {
      if (!(in >> p[j])) throw DomainError("truncated discrete copula file");
    }
    if (!(in >> w)) throw DomainError("truncated discrete copula file");
    pts.push_back(std::move(p));
    ws.push_back(w);
  }
  return DiscreteCopula(n, d, std::move(pts), std::move(ws));
}

DiscreteCopula read_discrete_copula_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open copula file: " + path);
  return read_discrete_copula(in);
}

void write_discrete_copula(std::ostream& out, const DiscreteCopula& dc) {
  out << dc.grid_order() << ' ' << dc.dim() << ' ' << dc.support_size()
      << '\n';
  char buf[32];
  for (std::size_t i = 0; i < dc.support_size(); ++i) {
    for (double v : dc.points()[i]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << ' ';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", dc.weights()[i]);
    out << buf << '\n';
  }
}

std::string discrete_copula_text(const DiscreteCopula& dc) {
  std::ostringstream os;
  write_discrete_copula(os, dc);
  return os.str();
}

}  // namespace depbounds
