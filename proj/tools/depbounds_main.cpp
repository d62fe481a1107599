#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depbounds/bounds.hpp"
#include "depbounds/copulas.hpp"
#include "depbounds/errors.hpp"
#include "depbounds/functionals.hpp"
#include "depbounds/optimizer.hpp"
#include "depbounds/reproduce.hpp"
#include "depbounds/rng.hpp"
#include "depbounds/serialize.hpp"

namespace {

using namespace depbounds;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCapability = 3;

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw DomainError("bad coordinate '" + tok + "' in point " + text);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<MarginalDist> parse_marginals(const std::vector<std::string>& specs,
                                          int d) {
  if (specs.empty()) {
    return std::vector<MarginalDist>(d, MarginalDist::uniform(0.0, 1.0));
  }
  std::vector<MarginalDist> ms;
  if (static_cast<int>(specs.size()) == 1 && d > 1) {
    for (int i = 0; i < d; ++i) ms.push_back(parse_marginal(specs[0]));
    return ms;
  }
  if (static_cast<int>(specs.size()) != d) {
    throw DomainError("need exactly d marginal specs (or one to repeat)");
  }
  for (const std::string& s : specs) ms.push_back(parse_marginal(s));
  return ms;
}

void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(out_path, content);
  }
}

struct CommonOpts {
  int d = 2;
  double beta = 1.0;
  std::string out;
  std::string format = "csv";
  int threads = 1;
  std::uint64_t seed = 0;
};

void require_seed(const CLI::App* cmd) {
  if (cmd->count("--seed") == 0) {
    throw DomainError("--seed is required for stochastic runs");
  }
}

int run(int argc, char** argv) {
  CLI::App app{
      "Dependence-uncertainty bounds for energy distances, energy scores and "
      "the multivariate Gini mean difference: estimation, analytic bounds, "
      "extremal-copula search and value reproduction."};
  app.require_subcommand(1);

  // ---- report ----
  auto* report = app.add_subcommand(
      "report", "Analytic lower/upper bounds for the given marginals");
  CommonOpts rop;
  std::vector<std::string> rfm, rgm;
  report->add_option("--d", rop.d, "dimension")->check(CLI::PositiveNumber);
  report->add_option("--beta", rop.beta, "exponent in (0,2)");
  report->add_option("--fm", rfm, "first-sample marginal specs");
  report->add_option("--gm", rgm, "second-sample marginal specs");
  report->add_option("--out", rop.out, "output path (stdout if absent)");
  report->add_option("--format", rop.format, "csv | json");

  // ---- estimate ----
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate S_beta(F,G) or the energy distance");
  CommonOpts eop;
  std::string ef, eg, emethod = "quadrature", equantity = "s";
  std::vector<std::string> efm, egm;
  long long esamples = 100000;
  int eorder = 64;
  estimate->add_option("--f", ef, "first copula")->required();
  estimate->add_option("--g", eg, "second copula")->required();
  estimate->add_option("--d", eop.d, "dimension");
  estimate->add_option("--beta", eop.beta, "exponent in (0,2)");
  estimate->add_option("--fm", efm, "marginals of F");
  estimate->add_option("--gm", egm, "marginals of G");
  estimate->add_option("--method", emethod, "exact | quadrature | mc");
  estimate->add_option("--samples", esamples, "Monte Carlo pair count");
  estimate->add_option("--order", eorder, "quadrature order per axis");
  estimate->add_option("--seed", eop.seed, "random seed (mc)");
  estimate->add_option("--quantity", equantity, "s | energy-distance");
  estimate->add_option("--threads", eop.threads, "worker count")
      ->envname("DEPBOUNDS_THREADS");
  estimate->add_option("--out", eop.out, "output path");
  estimate->add_option("--format", eop.format, "csv | json");

  // ---- score ----
  auto* score = app.add_subcommand(
      "score", "Energy score ES_beta(F,y) of a forecast at an observation");
  CommonOpts sop;
  std::string sf, sy, smethod = "quadrature";
  std::vector<std::string> sfm;
  long long ssamples = 100000;
  int sorder = 64;
  score->add_option("--f", sf, "forecast copula")->required();
  score->add_option("--y", sy, "observation, comma separated")->required();
  score->add_option("--d", sop.d, "dimension");
  score->add_option("--beta", sop.beta, "exponent in (0,2)");
  score->add_option("--fm", sfm, "marginals of F");
  score->add_option("--method", smethod, "exact | quadrature | mc");
  score->add_option("--samples", ssamples, "Monte Carlo pair count");
  score->add_option("--order", sorder, "quadrature order per axis");
  score->add_option("--seed", sop.seed, "random seed (mc)");
  score->add_option("--threads", sop.threads, "worker count")
      ->envname("DEPBOUNDS_THREADS");
  score->add_option("--out", sop.out, "output path");
  score->add_option("--format", sop.format, "csv | json");

  // ---- optimize ----
  auto* optimize = app.add_subcommand(
      "optimize", "Swap-based search for extremal permutation copulas");
  CommonOpts oop;
  std::string oobjective, oy, out_copula, out_trace;
  int on = 8, orestarts = 20;
  bool obrute = false;
  long long olimit = 1000000;
  optimize->add_option("--objective", oobjective,
                       "max-scc | min-scc | min-es | max-es")
      ->required();
  optimize->add_option("--n", on, "grid order")->required();
  optimize->add_option("--d", oop.d, "dimension");
  optimize->add_option("--beta", oop.beta, "exponent in (0,2)");
  optimize->add_option("--y", oy, "observation for ES objectives");
  optimize->add_option("--restarts", orestarts, "restart count");
  optimize->add_option("--seed", oop.seed, "random seed");
  optimize->add_flag("--brute-force", obrute,
                     "exhaustive enumeration instead of local search");
  optimize->add_option("--limit", olimit, "enumeration size cap");
  optimize->add_option("--threads", oop.threads, "worker count")
      ->envname("DEPBOUNDS_THREADS");
  optimize->add_option("--out-copula", out_copula, "best copula output path");
  optimize->add_option("--out-trace", out_trace, "restart trace output path");

  // ---- reproduce ----
  auto* reproduce = app.add_subcommand(
      "reproduce", "Run every reference-value and property check");
  CommonOpts pop;
  reproduce->add_option("--seed", pop.seed, "random seed")->required();
  reproduce->add_option("--threads", pop.threads, "worker count")
      ->envname("DEPBOUNDS_THREADS");
  reproduce->add_option("--out", pop.out, "row table output path");
  reproduce->add_option("--format", pop.format, "csv | json");

  // ---- figure ----
  auto* figure = app.add_subcommand(
      "figure", "Point sets for the illustrative figures");
  CommonOpts gop;
  std::string gname;
  long long gpoints = 0;
  figure->add_option("--name", gname,
                     "counterex-left | counterex-right | parallel-support | "
                     "spherical-scatter")
      ->required();
  figure->add_option("--points", gpoints, "number of points");
  figure->add_option("--seed", gop.seed, "random seed");
  figure->add_option("--out", gop.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (report->parsed()) {
    const auto fm = parse_marginals(rfm, rop.d);
    const auto gm = rgm.empty() ? fm : parse_marginals(rgm, rop.d);
    const BoundsReport rep = bounds_report(fm, gm, rop.beta);
    emit(parse_format(rop.format) == OutputFormat::Csv
             ? bounds_report_csv(rep)
             : bounds_report_json(rep),
         rop.out);
    return kExitOk;
  }

  if (estimate->parsed()) {
    FunctionalParams params;
    params.beta = eop.beta;
    params.method = parse_method(emethod);
    params.samples = esamples;
    params.quad_order = eorder;
    params.seed = eop.seed;
    params.workers = eop.threads;
    if (params.method == Method::MonteCarlo) require_seed(estimate);
    const JointDist f(parse_copula(ef, eop.d), parse_marginals(efm, eop.d));
    const JointDist g(parse_copula(eg, eop.d), parse_marginals(egm, eop.d));
    Estimate est;
    if (equantity == "s") {
      est = s_beta(f, g, params);
    } else if (equantity == "energy-distance") {
      est = energy_distance(f, g, params);
    } else {
      throw DomainError("unknown quantity '" + equantity +
                        "' (expected s | energy-distance)");
    }
    std::cout << "value " << format_double(est.value) << " se "
              << format_double(est.se) << " method "
              << method_name(est.method) << " effort " << est.effort << "\n";
    if (!eop.out.empty()) {
      emit(parse_format(eop.format) == OutputFormat::Csv
               ? estimate_csv(est, eop.beta, eop.d)
               : estimate_json(est, eop.beta, eop.d),
           eop.out);
    }
    return kExitOk;
  }

  if (score->parsed()) {
    FunctionalParams params;
    params.beta = sop.beta;
    params.method = parse_method(smethod);
    params.samples = ssamples;
    params.quad_order = sorder;
    params.seed = sop.seed;
    params.workers = sop.threads;
    if (params.method == Method::MonteCarlo) require_seed(score);
    const JointDist f(parse_copula(sf, sop.d), parse_marginals(sfm, sop.d));
    const Estimate est = energy_score(f, parse_point(sy), params);
    std::cout << "value " << format_double(est.value) << " se "
              << format_double(est.se) << " method "
              << method_name(est.method) << " effort " << est.effort << "\n";
    if (!sop.out.empty()) {
      emit(parse_format(sop.format) == OutputFormat::Csv
               ? estimate_csv(est, sop.beta, sop.d)
               : estimate_json(est, sop.beta, sop.d),
           sop.out);
    }
    return kExitOk;
  }

  if (optimize->parsed()) {
    require_seed(optimize);
    SearchProblem p;
    p.objective = parse_objective(oobjective);
    p.n = on;
    p.d = oop.d;
    p.beta = oop.beta;
    p.restarts = orestarts;
    p.seed = oop.seed;
    p.workers = oop.threads;
    if (!oy.empty()) p.y = parse_point(oy);
    const SearchResult res = obrute ? brute_force(p, olimit) : local_search(p);
    std::cout << "best " << format_double(res.best_value) << " evaluations "
              << res.swap_evaluations << "\n";
    if (!out_copula.empty()) {
      write_file_atomic(out_copula, discrete_copula_text(res.best));
    }
    if (!out_trace.empty()) write_file_atomic(out_trace, trace_csv(res));
    return kExitOk;
  }

  if (reproduce->parsed()) {
    const auto rows = run_reproduction(pop.seed, pop.threads);
    std::cout << reproduction_table(rows);
    const bool ok = all_pass(rows);
    std::cout << (ok ? "all checks passed\n" : "CHECKS FAILED\n");
    if (!pop.out.empty()) {
      emit(parse_format(pop.format) == OutputFormat::Csv
               ? reproduction_csv(rows)
               : reproduction_json(rows),
           pop.out);
    }
    return ok ? kExitOk : kExitCheckFailure;
  }

  if (figure->parsed()) {
    std::vector<std::vector<double>> pts;
    if (gname == "parallel-support") {
      const long long total = gpoints > 0 ? gpoints : 512;
      const long long half = total / 2;
      for (long long i = 0; i < half; ++i) {
        const double t = 0.5 * (i + 0.5) / half;
        pts.push_back({t, t + 0.5});
      }
      for (long long i = 0; i < total - half; ++i) {
        const double t = 0.5 + 0.5 * (i + 0.5) / (total - half);
        pts.push_back({t, t - 0.5});
      }
    } else if (gname == "spherical-scatter") {
      require_seed(figure);
      const long long total = gpoints > 0 ? gpoints : 2000;
      pts = sample(with_uniform_marginals(Copula::spherical(2)), total,
                   gop.seed);
    } else if (gname == "counterex-left" || gname == "counterex-right") {
      require_seed(figure);
      const long long total = gpoints > 0 ? gpoints : 5000;
      Rng rx = Rng::stream(gop.seed, 0);
      Rng ry = Rng::stream(gop.seed, 1);
      const bool flipped = gname == "counterex-right";
      for (long long i = 0; i < total; ++i) {
        const double u = rx.uniform();
        const double v = ry.uniform();
        const double x2 = flipped ? 1.0 - u : u;
        pts.push_back({std::abs(4.0 * u - v), std::abs(x2 - 4.0 * v)});
      }
    } else {
      throw DomainError(
          "unknown figure '" + gname +
          "' (expected counterex-left | counterex-right | parallel-support | "
          "spherical-scatter)");
    }
    emit(points_csv(pts), gop.out);
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
