#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "l1est/errors.hpp"
#include "l1est/estimators.hpp"
#include "l1est/harness.hpp"
#include "l1est/hermite.hpp"
#include "l1est/lowerbound.hpp"
#include "l1est/polyapprox.hpp"
#include "l1est/selftest.hpp"

namespace py = pybind11;
using namespace l1est;

namespace {

std::span<const double> as_span(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw DomainError("expected a one-dimensional array");
    return {a.data(), static_cast<std::size_t>(a.size())};
}

py::dict prior_dict(const DiscretePrior& p) {
    std::vector<double> t, w;
    for (const auto& a : p.atoms()) {
        t.push_back(a.t);
        w.push_back(a.w);
    }
    py::dict d;
    d["atoms"] = t;
    d["weights"] = w;
    return d;
}

DiscretePrior prior_from(const std::vector<double>& t, const std::vector<double>& w) {
    if (t.size() != w.size()) throw DomainError("atoms and weights differ in length");
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < t.size(); ++i) atoms.push_back({t[i], w[i]});
    return DiscretePrior(std::move(atoms));
}

py::dict report_dict(const RiskReport& r) {
    py::dict d;
    d["scenario_id"] = r.scenario_id;
    d["n"] = r.n;
    d["variant"] = std::string(to_string(r.variant));
    d["K"] = r.K;
    d["M"] = r.M;
    d["replications"] = r.replications;
    d["estimate_mean"] = r.estimate_mean;
    d["bias"] = r.bias;
    d["variance"] = r.variance;
    d["mse"] = r.mse;
    d["mc_stderr"] = r.mc_stderr;
    d["bias_bound"] = r.bias_bound;
    d["var_bound"] = r.var_bound;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Estimation of the mean absolute value of a normal mean vector.";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_RuntimeError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.attr("BERNSTEIN_CONSTANT") = kBernsteinConstant;

    m.def("hermite", &hermite_eval, py::arg("k"), py::arg("y"), py::arg("max_degree") = kDefaultMaxHermiteDegree);
    m.def("hermite_second_moment", &hermite_second_moment, py::arg("k"), py::arg("mu"));

    m.def(
        "best_approx",
        [](int K) {
            const auto s = remez_best_approx(K);
            py::dict d;
            d["K"] = K;
            d["delta"] = s.delta;
            d["alternation_points"] = s.alternation_points;
            d["alternation_signs"] = s.alternation_signs;
            d["coefficients"] = s.poly.half_coeffs();
            d["iterations"] = s.iterations;
            return d;
        },
        py::arg("K"));
    m.def(
        "approx_coefficients",
        [](int K, const std::string& basis) {
            return parse_basis(basis) == ApproxBasis::BestApprox ? remez_best_approx(K).poly.half_coeffs()
                                                                  : build_G_K(K).half_coeffs();
        },
        py::arg("K"), py::arg("basis") = "best");
    m.def(
        "uniform_error", [](int K, const std::string& basis) { return cached_uniform_error(K, parse_basis(basis)); },
        py::arg("K"), py::arg("basis") = "best");

    m.def(
        "estimate",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> y, const std::string& variant,
           std::optional<double> M, std::optional<int> K, std::optional<std::size_t> k_n, std::uint64_t seed,
           std::optional<std::string> basis, double c) {
            EstimatorSpec spec;
            spec.variant = parse_variant(variant);
            spec.M = M;
            spec.K_override = K;
            spec.k_n = k_n;
            spec.seed = seed;
            spec.c = c;
            if (basis) spec.basis = parse_basis(*basis);
            const auto values = as_span(y);
            py::gil_scoped_release release;
            return estimate(spec, values);
        },
        py::arg("y"), py::arg("variant") = "bounded", py::arg("M") = py::none(), py::arg("K") = py::none(),
        py::arg("k_n") = py::none(), py::arg("seed") = 0, py::arg("basis") = py::none(), py::arg("c") = 2.0);
    m.def("select_K_star", &select_K_star, py::arg("n"));

    m.def(
        "prior_pair",
        [](int k, double M) {
            const auto p = construct_prior_pair(k);
            py::dict d;
            d["nu0"] = prior_dict(scale_prior(p.nu0, M));
            d["nu1"] = prior_dict(scale_prior(p.nu1, M));
            d["delta_k"] = p.delta_k;
            d["condition"] = p.condition;
            return d;
        },
        py::arg("k"), py::arg("M") = 1.0);
    m.def(
        "chi_square",
        [](const std::vector<double>& t0, const std::vector<double>& w0, const std::vector<double>& t1,
           const std::vector<double>& w1, std::size_t n) {
            const double i1 = chi_square_mixture_1d(prior_from(t0, w0), prior_from(t1, w1));
            return n == 1 ? i1 : chi_square_product(i1, n);
        },
        py::arg("atoms0"), py::arg("weights0"), py::arg("atoms1"), py::arg("weights1"), py::arg("n") = 1);
    m.def("chi_square_tail_bound", &chi_square_tail_bound, py::arg("M"), py::arg("k_n"));
    m.def("chi_square_bound_n", &chi_square_bound_n, py::arg("M"), py::arg("k_n"), py::arg("n"));
    m.def("select_kn", &select_kn_bounded, py::arg("n"));

    m.def(
        "run_config",
        [](const std::string& json_text, std::optional<std::size_t> workers) {
            const auto config = parse_run_config(json_text);
            std::vector<RiskReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_all(config, resolve_workers(workers.value_or(config.workers)));
            }
            py::list out;
            for (const auto& r : reports) out.append(report_dict(r));
            return out;
        },
        py::arg("config_json"), py::arg("workers") = py::none());

    m.def("selftest", [] {
        py::list out;
        for (const auto& c : run_selftest()) out.append(py::make_tuple(c.name, c.passed, c.detail));
        return out;
    });
}
