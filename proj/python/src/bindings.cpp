#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regcalc/chi_window.hpp"
#include "regcalc/common.hpp"
#include "regcalc/estimators.hpp"
#include "regcalc/grid_paths.hpp"
#include "regcalc/ito_verify.hpp"
#include "regcalc/kolmogorov.hpp"
#include "regcalc/operator_algebra.hpp"
#include "regcalc/replicate.hpp"
#include "regcalc/runner.hpp"

#include <optional>

namespace py = pybind11;
using namespace regcalc;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

SamplePath as_path(const Array& values, double horizon) {
    if (values.ndim() != 1) throw std::invalid_argument("path must be one-dimensional");
    const auto n = static_cast<std::size_t>(values.shape(0));
    if (n < 3) throw std::invalid_argument("path needs at least 3 samples");
    std::vector<double> v(values.data(), values.data() + n);
    return SamplePath(Grid(horizon, n - 1), std::move(v));
}

Array to_array(std::span<const double> v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

EpsSchedule schedule_for(const Grid& g, const std::optional<std::vector<std::size_t>>& ladder) {
    return ladder ? EpsSchedule(g, *ladder) : EpsSchedule::standard(g);
}

py::dict series_dict(const EstimateSeries& s) {
    py::dict d;
    d["eps"] = s.eps;
    d["values"] = s.values;
    d["extrapolated"] = s.extrapolated;
    d["monotone"] = s.monotone;
    d["last_rel_change"] = s.last_rel_change;
    return d;
}

C12Function c12_by_name(const std::string& name) {
    if (name == "x2") return C12Function::square();
    if (name == "half_x2") return C12Function::half_square();
    if (name == "tx") return C12Function::time_times_x();
    if (name == "sin") return C12Function::sine();
    throw std::invalid_argument("unknown function '" + name + "' (x2, half_x2, tx, sin)");
}

ElementaryFunctional functional_by_name(const std::string& name) {
    if (name == "point") return ElementaryFunctional::point_square();
    if (name == "sqmean") return ElementaryFunctional::squared_mean();
    if (name == "sqnorm") return ElementaryFunctional::squared_norm();
    throw std::invalid_argument("unknown functional '" + name + "' (point, sqmean, sqnorm)");
}

py::dict ito_dict(const ItoReport& r) {
    py::list levels;
    for (const auto& t : r.levels) {
        py::dict d;
        d["eps"] = t.eps;
        d["increment"] = t.increment;
        d["lhs"] = t.lhs;
        d["time_term"] = t.time_term;
        d["forward_term"] = t.forward_term;
        d["perp_term"] = t.perp_term;
        d["second_order"] = t.second_order;
        d["residual"] = t.residual;
        d["gap"] = t.gap;
        d["sup_residual"] = t.sup_residual;
        levels.append(d);
    }
    py::dict out;
    out["name"] = r.name;
    out["levels"] = levels;
    out["passed"] = r.passed;
    return out;
}

SquareMeasure measure_by_name(const std::string& name, const WindowGrid& wg) {
    if (name == "dirac") return SquareMeasure::dirac();
    if (name == "diag") return SquareMeasure::constant_diagonal(wg, 1.0);
    if (name == "l2") {
        const auto one = wg.sample([](double) { return 1.0; });
        return SquareMeasure::separable(one, one);
    }
    throw std::invalid_argument("unknown measure '" + name + "' (dirac, diag, l2)");
}

}  // namespace

PYBIND11_MODULE(_regcalc, m) {
    m.doc() = "Stochastic calculus via regularization";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("set_thread_count", &set_thread_count, py::arg("threads"));
    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));

    py::class_<ProcessSpec>(m, "ProcessSpec")
        .def_static("brownian", &ProcessSpec::brownian, py::arg("sigma") = 1.0)
        .def_static("fbm", &ProcessSpec::fbm, py::arg("hurst"))
        .def_static("bifractional", &ProcessSpec::bifractional, py::arg("hurst"), py::arg("k"),
                    py::arg("multiplier") = 1.0)
        .def_static("bifractional_unit_qv", &ProcessSpec::bifractional_unit_qv, py::arg("hurst"), py::arg("k"),
                    py::arg("sigma") = 1.0)
        .def_static("dirichlet", &ProcessSpec::dirichlet_default, py::arg("sigma") = 1.0, py::arg("scale") = 0.5)
        .def_static("identity", &ProcessSpec::identity)
        .def_static("random_monotone", &ProcessSpec::random_monotone)
        .def_static("deterministic", &ProcessSpec::deterministic, py::arg("id"))
        .def_property_readonly("label", &ProcessSpec::label)
        .def_property_readonly("declared_qv_rate", [](const ProcessSpec& s) { return declared_qv_rate(s); })
        .def("__repr__", [](const ProcessSpec& s) { return "<ProcessSpec " + s.label() + ">"; });

    m.def(
        "simulate",
        [](const ProcessSpec& spec, double horizon, std::size_t steps, std::uint64_t seed) {
            return to_array(simulate(spec, Grid(horizon, steps), seed).values());
        },
        py::arg("spec"), py::arg("horizon") = 1.0, py::arg("steps") = 1024, py::arg("seed") = 1);

    m.def(
        "ensemble",
        [](const ProcessSpec& spec, double horizon, std::size_t steps, std::size_t paths, std::uint64_t seed) {
            const auto all = ensemble(spec, Grid(horizon, steps), paths, seed).materialize();
            Array out({static_cast<py::ssize_t>(paths), static_cast<py::ssize_t>(steps + 1)});
            auto* dst = out.mutable_data();
            for (const auto& p : all) dst = std::copy(p.values().begin(), p.values().end(), dst);
            return out;
        },
        py::arg("spec"), py::arg("horizon") = 1.0, py::arg("steps") = 1024, py::arg("paths") = 100,
        py::arg("seed") = 1);

    m.def(
        "quadratic_variation",
        [](const Array& x, double horizon, double t, std::optional<std::vector<std::size_t>> ladder) {
            const auto p = as_path(x, horizon);
            return series_dict(quadratic_variation(p, schedule_for(p.grid(), ladder), t));
        },
        py::arg("x"), py::arg("horizon") = 1.0, py::arg("t") = 1.0, py::arg("ladder") = py::none());

    m.def(
        "covariation",
        [](const Array& x, const Array& y, double horizon, double t, std::optional<std::vector<std::size_t>> ladder) {
            const auto px = as_path(x, horizon), py_ = as_path(y, horizon);
            return series_dict(covariation(px, py_, schedule_for(px.grid(), ladder), t));
        },
        py::arg("x"), py::arg("y"), py::arg("horizon") = 1.0, py::arg("t") = 1.0, py::arg("ladder") = py::none());

    m.def(
        "forward_integral",
        [](const Array& integrand, const Array& x, double horizon, double t,
           std::optional<std::vector<std::size_t>> ladder) {
            const auto p = as_path(x, horizon);
            if (integrand.ndim() != 1 || static_cast<std::size_t>(integrand.shape(0)) != p.size())
                throw std::invalid_argument("integrand must be sampled on the same grid as x");
            const std::span<const double> z(integrand.data(), p.size());
            return series_dict(forward_integral(z, p, schedule_for(p.grid(), ladder), t));
        },
        py::arg("integrand"), py::arg("x"), py::arg("horizon") = 1.0, py::arg("t") = 1.0,
        py::arg("ladder") = py::none());

    m.def(
        "window_qv",
        [](const Array& x, const std::string& measure, double horizon, double t,
           std::optional<std::vector<std::size_t>> ladder) {
            const auto p = as_path(x, horizon);
            const auto wg = WindowGrid::full(p.grid());
            const auto mu = measure_by_name(measure, wg);
            auto d = series_dict(chi_qv(mu, p, wg, schedule_for(p.grid(), ladder), t));
            d["closed_form_unit_rate"] = chi_qv_formula(mu, [](double s) { return s; }, wg, t);
            return d;
        },
        py::arg("x"), py::arg("measure") = "dirac", py::arg("horizon") = 1.0, py::arg("t") = 1.0,
        py::arg("ladder") = py::none());

    m.def(
        "ito_check",
        [](const Array& x, const std::string& function, double horizon, double t, double tolerance,
           std::optional<std::vector<std::size_t>> ladder) {
            const auto p = as_path(x, horizon);
            return ito_dict(ito_report(c12_by_name(function), p, schedule_for(p.grid(), ladder), t, tolerance));
        },
        py::arg("x"), py::arg("function") = "x2", py::arg("horizon") = 1.0, py::arg("t") = 1.0,
        py::arg("tolerance") = 0.05, py::arg("ladder") = py::none());

    m.def(
        "banach_ito_check",
        [](const Array& x, const std::string& functional, double horizon, double t, double tolerance,
           std::optional<std::vector<std::size_t>> ladder) {
            const auto p = as_path(x, horizon);
            const auto wg = WindowGrid::full(p.grid());
            return ito_dict(banach_ito_residual(functional_by_name(functional), p, wg,
                                                schedule_for(p.grid(), ladder), t, tolerance));
        },
        py::arg("x"), py::arg("functional") = "sqmean", py::arg("horizon") = 1.0, py::arg("t") = 1.0,
        py::arg("tolerance") = 0.05, py::arg("ladder") = py::none());

    py::class_<VanillaSolution>(m, "VanillaSolution")
        .def(py::init([](const std::string& payoff, double sigma, double horizon, std::size_t order) {
                 return VanillaSolution(VanillaPayoff::parse(payoff, sigma), horizon, order);
             }),
             py::arg("payoff") = "square", py::arg("sigma") = 1.0, py::arg("horizon") = 1.0, py::arg("order") = 64)
        .def("value", &VanillaSolution::value, py::arg("t"), py::arg("x"))
        .def("dx", &VanillaSolution::dx, py::arg("t"), py::arg("x"))
        .def("dxx", &VanillaSolution::dxx, py::arg("t"), py::arg("x"))
        .def("heat_residual", &VanillaSolution::heat_residual, py::arg("t"), py::arg("x"), py::arg("h") = 1e-4)
        .def_property_readonly("converged", &VanillaSolution::converged);

    m.def(
        "replicate",
        [](const VanillaSolution& v, const ProcessSpec& model, std::size_t steps, std::size_t paths,
           std::uint64_t seed) {
            const Grid g(v.horizon(), steps);
            ReplicateOptions opts;
            opts.paths = paths;
            opts.seed = seed;
            const auto rep = replicate_payoff(v, model, g, EpsSchedule::standard(g), opts);
            std::vector<double> h, g0, integral, residual;
            for (const auto& p : rep.paths) {
                h.push_back(p.h);
                g0.push_back(p.g0);
                integral.push_back(p.hedge_integral);
                residual.push_back(p.residual);
            }
            py::dict d;
            d["model"] = rep.model;
            d["h"] = to_array(h);
            d["G0"] = to_array(g0);
            d["hedge_integral"] = to_array(integral);
            d["residual"] = to_array(residual);
            d["mean_abs_residual"] = rep.abs_residual.mean;
            d["stderr_abs_residual"] = rep.abs_residual.stderr_;
            d["relative_error"] = rep.relative_error;
            d["improper"] = rep.improper;
            d["qv_warning"] = rep.qv_warning;
            return d;
        },
        py::arg("solution"), py::arg("model"), py::arg("steps") = 2048, py::arg("paths") = 200, py::arg("seed") = 1);

    m.def(
        "trace_and_bounds",
        [](const Mat& t) {
            const auto b = trace_and_bounds(t);
            py::dict d;
            d["trace"] = b.trace;
            d["l1_norm"] = b.l1_norm;
            d["diag_abs_sum"] = b.diag_abs_sum;
            d["bound_ok"] = b.bound_ok;
            return d;
        },
        py::arg("t"));
    m.def("tensor_to_operator", &tensor_to_operator, py::arg("xs"), py::arg("ys"));
    m.def("pairing_trace", &pairing_trace, py::arg("tu"), py::arg("lphi"));

    m.def(
        "kolmogorov_ou",
        [](std::size_t dim, double s, std::size_t paths, std::size_t steps, std::uint64_t seed) {
            const auto setup = default_ou_quadratic(dim, s);
            KolmoProblem p;
            p.space = setup.space;
            p.coeffs = CoeffFns::constant_coeffs(setup.b, setup.sigma);
            p.g = [g = setup.g](const Vec& x) { return g(x); };
            p.s = setup.s;
            p.eta = setup.eta;
            p.steps = steps;
            const auto est = kolmogorov_mc(p, paths, seed);
            py::dict d;
            d["v_hat"] = est.v_hat;
            d["stderr"] = est.stderr_;
            d["oracle"] = gaussian_oracle(setup.space, setup.b, setup.sigma, setup.g, setup.eta, setup.s);
            return d;
        },
        py::arg("dim") = 16, py::arg("s") = 0.5, py::arg("paths") = 10000, py::arg("steps") = 4, py::arg("seed") = 1);
}
