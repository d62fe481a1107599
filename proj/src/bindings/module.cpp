#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "depbounds/bounds.hpp"
#include "depbounds/copulas.hpp"
#include "depbounds/errors.hpp"
#include "depbounds/functionals.hpp"
#include "depbounds/marginals.hpp"
#include "depbounds/optimizer.hpp"
#include "depbounds/reproduce.hpp"
#include "depbounds/serialize.hpp"

namespace py = pybind11;
using namespace depbounds;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Energy distances, energy scores and Gini mean differences with "
      "dependence-uncertainty bounds and extremal-copula search";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError",
                                          PyExc_RuntimeError);

  // marginals
  py::class_<MarginalDist>(m, "MarginalDist")
      .def_static("uniform", &MarginalDist::uniform, py::arg("a"),
                  py::arg("b"))
      .def_static("point_mass", &MarginalDist::point_mass, py::arg("c"))
      .def_static("empirical", &MarginalDist::empirical, py::arg("sample"))
      .def("quantile", &MarginalDist::quantile, py::arg("u"))
      .def("cdf", &MarginalDist::cdf, py::arg("x"))
      .def("mean", &MarginalDist::mean)
      .def("variance", &MarginalDist::variance)
      .def("symmetry_center", &MarginalDist::symmetry_center)
      .def("__eq__", &MarginalDist::operator==)
      .def("__repr__", &MarginalDist::describe);
  m.def("parse_marginal", &parse_marginal, py::arg("spec"));

  py::class_<DiamondDist>(m, "DiamondDist")
      .def(py::init<MarginalDist, MarginalDist>(), py::arg("f"), py::arg("g"))
      .def("cdf", &DiamondDist::cdf, py::arg("x"))
      .def("quantile", &DiamondDist::quantile, py::arg("u"));
  m.def("diamond_cdf", &diamond_cdf, py::arg("f"), py::arg("g"), py::arg("x"));
  m.def("diamond_quantile", &diamond_quantile, py::arg("f"), py::arg("g"),
        py::arg("u"));
  m.def("gini_m", &gini_m, py::arg("f"), py::arg("g"), py::arg("beta"));
  m.def("gini_m_quadrature", &gini_m_quadrature, py::arg("f"), py::arg("g"),
        py::arg("beta"), py::arg("abs_tol") = 1e-10);
  m.def("m2_cross", &m2_cross, py::arg("f"), py::arg("g"));

  // copulas
  py::class_<DiscreteCopula>(m, "DiscreteCopula")
      .def(py::init<int, int, std::vector<std::vector<double>>,
                    std::vector<double>>(),
           py::arg("n"), py::arg("d"), py::arg("points"), py::arg("weights"))
      .def_static("from_permutations", &DiscreteCopula::from_permutations,
                  py::arg("n"), py::arg("perms"))
      .def_property_readonly("n", &DiscreteCopula::grid_order)
      .def_property_readonly("d", &DiscreteCopula::dim)
      .def_property_readonly("points", &DiscreteCopula::points)
      .def_property_readonly("weights", &DiscreteCopula::weights)
      .def_property_readonly("permutations", &DiscreteCopula::permutations)
      .def("__eq__", &DiscreteCopula::operator==)
      .def("text", [](const DiscreteCopula& dc) {
        return discrete_copula_text(dc);
      });

  py::class_<Copula>(m, "Copula")
      .def_static("comonotone", &Copula::comonotone, py::arg("d"))
      .def_static("countermonotone", &Copula::countermonotone)
      .def_static("independence", &Copula::independence, py::arg("d"))
      .def_static("parallel", &Copula::parallel)
      .def_static("spherical", &Copula::spherical, py::arg("d"))
      .def_static("hat", &Copula::hat)
      .def_static("discrete", &Copula::discrete, py::arg("dc"))
      .def_property_readonly("d", &Copula::dim)
      .def("__repr__",
           [](const Copula& c) { return copula_kind_name(c.kind()); });
  m.def("parse_copula", &parse_copula, py::arg("spec"), py::arg("d"));
  m.def("read_discrete_copula_file", &read_discrete_copula_file,
        py::arg("path"));

  py::class_<JointDist>(m, "JointDist")
      .def(py::init<Copula, std::vector<MarginalDist>>(), py::arg("copula"),
           py::arg("marginals"))
      .def_readonly("copula", &JointDist::copula)
      .def_readonly("marginals", &JointDist::marginals)
      .def_property_readonly("d", &JointDist::dim);
  m.def("with_uniform_marginals", &with_uniform_marginals, py::arg("copula"));
  m.def("sample", &sample, py::arg("dist"), py::arg("count"), py::arg("seed"),
        py::arg("workers") = 1);
  m.def("discretize", &discretize, py::arg("copula"), py::arg("n"));

  py::class_<SymmetryElement>(m, "SymmetryElement")
      .def(py::init([](std::vector<int> perm, std::vector<bool> reflect) {
             return SymmetryElement{std::move(perm), std::move(reflect)};
           }),
           py::arg("perm"), py::arg("reflect"))
      .def_readonly("perm", &SymmetryElement::perm)
      .def_readonly("reflect", &SymmetryElement::reflect);
  m.def("hyperoctahedral_group", &hyperoctahedral_group, py::arg("d"));
  m.def("apply_symmetry", &apply_symmetry, py::arg("copula"), py::arg("t"));
  m.def("symmetrize", &symmetrize, py::arg("copula"));
  m.def("mix", &mix, py::arg("parts"));

  // functionals
  py::enum_<Method>(m, "Method")
      .value("exact", Method::Exact)
      .value("quadrature", Method::Quadrature)
      .value("monte_carlo", Method::MonteCarlo);

  py::class_<FunctionalParams>(m, "FunctionalParams")
      .def(py::init([](double beta, const std::string& method,
                       long long samples, int quad_order, std::uint64_t seed,
                       int workers) {
             FunctionalParams p;
             p.beta = beta;
             p.method = parse_method(method);
             p.samples = samples;
             p.quad_order = quad_order;
             p.seed = seed;
             p.workers = workers;
             return p;
           }),
           py::arg("beta") = 1.0, py::arg("method") = "quadrature",
           py::arg("samples") = 100000, py::arg("quad_order") = 64,
           py::arg("seed") = 0, py::arg("workers") = 1)
      .def_readwrite("beta", &FunctionalParams::beta)
      .def_readwrite("samples", &FunctionalParams::samples)
      .def_readwrite("quad_order", &FunctionalParams::quad_order)
      .def_readwrite("seed", &FunctionalParams::seed)
      .def_readwrite("workers", &FunctionalParams::workers);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("se", &Estimate::se)
      .def_readonly("effort", &Estimate::effort)
      .def_readonly("mc_fallback", &Estimate::mc_fallback)
      .def_property_readonly(
          "method", [](const Estimate& e) { return method_name(e.method); })
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(value=" + format_double(e.value) +
               ", se=" + format_double(e.se) + ", method=" +
               method_name(e.method) + ")";
      });

  m.def("s_beta", &s_beta, py::arg("f"), py::arg("g"), py::arg("params"));
  m.def("s_beta_point", &s_beta_point, py::arg("f"), py::arg("y"),
        py::arg("params"));
  m.def("energy_score", &energy_score, py::arg("f"), py::arg("y"),
        py::arg("params"));
  m.def("energy_distance", &energy_distance, py::arg("f"), py::arg("g"),
        py::arg("params"));
  m.def("atomic_support", &atomic_support, py::arg("dist"));
  m.def("atoms_of", &atoms_of, py::arg("dist"));

  // bounds
  m.def("sphere_mean_distance_constant", &sphere_mean_distance_constant,
        py::arg("d"));
  m.def("lower_bound_s", &lower_bound_s, py::arg("f"), py::arg("g"),
        py::arg("beta"));
  m.def("upper_bound_s", &upper_bound_s, py::arg("f"), py::arg("g"),
        py::arg("beta"));
  m.def(
      "sharp_upper_scc",
      [](int d, double beta) {
        const SharpBound sb = sharp_upper_scc(d, beta);
        return py::make_tuple(sb.value, sb.sharp);
      },
      py::arg("d"), py::arg("beta") = 1.0);
  m.def("lower_bound_score", &lower_bound_score, py::arg("d"),
        py::arg("beta"));

  py::class_<BoundRow>(m, "BoundRow")
      .def_readonly("name", &BoundRow::name)
      .def_readonly("value", &BoundRow::value)
      .def_readonly("sharp", &BoundRow::sharp)
      .def_readonly("derivation", &BoundRow::derivation);
  py::class_<BoundsReport>(m, "BoundsReport")
      .def_readonly("d", &BoundsReport::d)
      .def_readonly("beta", &BoundsReport::beta)
      .def_readonly("lower", &BoundsReport::lower)
      .def_readonly("upper", &BoundsReport::upper)
      .def_readonly("estimate", &BoundsReport::estimate)
      .def("bounds_consistent", &BoundsReport::bounds_consistent)
      .def("estimate_bracketed", &BoundsReport::estimate_bracketed)
      .def("csv", &bounds_report_csv)
      .def("json", &bounds_report_json);
  m.def("bounds_report", &bounds_report, py::arg("f"), py::arg("g"),
        py::arg("beta"), py::arg("estimate") = std::nullopt);

  // optimizer
  py::class_<SearchProblem>(m, "SearchProblem")
      .def(py::init([](const std::string& objective, int n, int d, double beta,
                       std::vector<double> y, int restarts,
                       std::uint64_t seed, int workers) {
             SearchProblem p;
             p.objective = parse_objective(objective);
             p.n = n;
             p.d = d;
             p.beta = beta;
             p.y = std::move(y);
             p.restarts = restarts;
             p.seed = seed;
             p.workers = workers;
             return p;
           }),
           py::arg("objective"), py::arg("n"), py::arg("d") = 2,
           py::arg("beta") = 1.0, py::arg("y") = std::vector<double>{},
           py::arg("restarts") = 20, py::arg("seed") = 0,
           py::arg("workers") = 1);

  py::class_<RestartTrace>(m, "RestartTrace")
      .def_readonly("restart", &RestartTrace::restart)
      .def_readonly("iterations", &RestartTrace::iterations)
      .def_readonly("final_value", &RestartTrace::final_value);
  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("best", &SearchResult::best)
      .def_readonly("best_value", &SearchResult::best_value)
      .def_readonly("trace", &SearchResult::trace)
      .def_readonly("swap_evaluations", &SearchResult::swap_evaluations);
  m.def("local_search", &local_search, py::arg("problem"));
  m.def("brute_force", &brute_force, py::arg("problem"),
        py::arg("limit") = 1000000);

  py::class_<HatComparison>(m, "HatComparison")
      .def_readonly("es_comonotone", &HatComparison::es_comonotone)
      .def_readonly("es_hat", &HatComparison::es_hat)
      .def_readonly("separation_sigmas", &HatComparison::separation_sigmas)
      .def_property_readonly("separated", [](const HatComparison& c) {
        return c.status == HatStatus::Separated;
      });
  m.def("verify_hat_counterexample", &verify_hat_counterexample,
        py::arg("samples"), py::arg("seed"), py::arg("workers") = 1);

  // reproduction battery
  py::class_<CheckRow>(m, "CheckRow")
      .def_readonly("criterion", &CheckRow::criterion)
      .def_readonly("name", &CheckRow::name)
      .def_readonly("got", &CheckRow::got)
      .def_readonly("lo", &CheckRow::lo)
      .def_readonly("hi", &CheckRow::hi)
      .def_readonly("passed", &CheckRow::pass)
      .def_readonly("detail", &CheckRow::detail);
  m.def("run_reproduction", &run_reproduction, py::arg("seed"),
        py::arg("workers") = 1);
}
