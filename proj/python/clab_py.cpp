/**
 * @file clab_py.cpp
 * @brief Python bindings for the main solvers
 */

#include "clab/closed_forms.hpp"
#include "clab/errors.hpp"
#include "clab/pipeline.hpp"
#include "clab/polar_matching.hpp"
#include "clab/timemap.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace clab;

namespace {

py::array_t<double> field_array(const Field2D& f) {
    py::array_t<double> a({f.grid.Ny + 1, f.grid.Nx + 1});
    auto v = a.mutable_unchecked<2>();
    for (int j = 0; j <= f.grid.Ny; ++j)
        for (int i = 0; i <= f.grid.Nx; ++i) v(j, i) = f(i, j);
    return a;
}

py::dict closed_form_dict(const ClosedForm1D& s, int points) {
    std::vector<double> y(points), u(points);
    for (int k = 0; k < points; ++k) {
        y[k] = double(k) / (points - 1);
        u[k] = s.value(y[k]);
    }
    py::dict d;
    d["regime"] = to_string(s.regime);
    d["xi"] = s.xi;
    d["amp"] = s.amp;
    d["slope0"] = s.derivative(0.0);
    d["is_subsolution"] = s.is_subsolution;
    if (s.h_constants) d["h_constants"] = *s.h_constants;
    d["y"] = y;
    d["u"] = u;
    return d;
}

}  // namespace

PYBIND11_MODULE(clab, m) {
    m.doc() = "Space-charge limited current solvers";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def("gamma", [](double mu) { return clab::gamma(mu); }, py::arg("mu"),
          "Time map: half-length of the interval for the profile with maximum mu.");
    m.def("r_f", &r_f);
    m.def("lambda_star", &lambda_star, py::arg("R"));
    m.def("lambda_one", &lambda_one, py::arg("R"));
    m.def(
        "classify",
        [](double lambda, double V0, double R) {
            const auto p = classify(lambda, V0, R);
            py::dict d;
            d["regime"] = to_string(p.regime);
            d["mu"] = p.mu;
            d["sup_norm"] = p.sup_norm;
            d["L"] = p.L;
            return d;
        },
        py::arg("lambda_"), py::arg("V0"), py::arg("R"));

    m.def(
        "solve1d",
        [](double j, int points) {
            if (!(j > 0.0)) throw DomainError("j must be positive");
            if (points < 2) throw DomainError("points must be at least 2");
            if (j == 4.0 / 9.0) return closed_form_dict(flat_solution_1d(), points);
            if (j > 4.0 / 9.0) return closed_form_dict(free_boundary_solution_1d(j), points);
            return closed_form_dict(subcritical_solution_1d(j), points);
        },
        py::arg("j"), py::arg("points") = 101);
    m.def(
        "power_solution",
        [](double q, double lambda, int points) {
            return closed_form_dict(power_solution_nonautonomous(q, lambda), points);
        },
        py::arg("q"), py::arg("lambda_"), py::arg("points") = 101);
    m.def("lambda_q_star", &lambda_q_star, py::arg("q"));

    m.def(
        "shoot",
        [](double V, double lambda, double theta_lo) {
            const auto p = shoot_v2(V, lambda, theta_lo);
            py::dict d;
            d["s"] = p.s;
            d["v"] = p.v;
            d["dv"] = p.dv;
            d["ode_residual"] = p.ode_residual;
            return d;
        },
        py::arg("V"), py::arg("lambda_"), py::arg("theta_lo"),
        "Degenerate solution shot from theta = pi; samples in s = pi - theta.");

    m.def(
        "subsolution",
        [](double beta, double a, double b) {
            AssemblyReport rep;
            const auto U = find_subsolution(beta, default_eps_list(), &rep);
            py::dict d;
            d["alpha"] = U.alpha;
            d["eps"] = U.eps;
            d["A_max"] = max_amplitude(U, a, b);
            d["robin_lhs"] = rep.robin_lhs;
            d["robin_rhs"] = rep.robin_rhs;
            std::vector<double> jumps;
            for (const auto& j : rep.jumps) jumps.push_back(j.jump);
            d["junction_jumps"] = jumps;
            return d;
        },
        py::arg("beta"), py::arg("a") = 1.0, py::arg("b") = 1.0);

    m.def(
        "solve2d",
        [](double beta, std::optional<double> A, double a, double b, int Nx, int Ny, double tol,
           int max_iter) {
            Solve2DOptions o;
            o.beta = beta;
            o.A = A;
            o.a = a;
            o.b = b;
            o.Nx = Nx;
            o.Ny = Ny;
            o.iterate.tol = tol;
            o.iterate.max_iter = max_iter;
            Solve2DResult r;
            {
                py::gil_scoped_release release;
                r = run_solve2d(o);
            }
            py::dict d;
            d["A"] = r.A;
            d["A_max"] = r.A_max;
            d["u_min"] = field_array(r.between.u_min);
            d["u_max"] = field_array(r.between.u_max);
            d["sub"] = field_array(r.sub);
            d["gap"] = r.between.gap;
            d["ordered"] = r.order.ok;
            d["residual"] = r.residual;
            d["fit_minus"] = r.fit_minus.exponent;
            d["fit_plus"] = r.fit_plus.exponent;
            d["nondegeneracy"] = r.nondegeneracy.min_ratio;
            d["iterations"] = std::make_pair(r.between.from_below.iterations,
                                             r.between.from_above.iterations);
            d["flux"] = r.flux;
            return d;
        },
        py::arg("beta") = 0.25, py::arg("A") = py::none(), py::arg("a") = 1.0,
        py::arg("b") = 1.0, py::arg("Nx") = 256, py::arg("Ny") = 128, py::arg("tol") = 1e-8,
        py::arg("max_iter") = 2000);

    m.def(
        "parabolic",
        [](double beta, std::optional<double> A, int Nx, int Ny, std::optional<double> dt,
           double T) {
            ParabolicOptions o;
            o.beta = beta;
            o.A = A;
            o.Nx = Nx;
            o.Ny = Ny;
            o.dt = dt;
            o.T = T;
            ParabolicResult r;
            {
                py::gil_scoped_release release;
                r = run_parabolic(o);
            }
            py::dict d;
            d["dt"] = r.dt;
            d["T"] = r.T;
            d["steps"] = r.steps;
            d["t"] = r.to_limit.t;
            d["distance"] = r.to_limit.distance;
            d["distance_nonincreasing"] = r.distance_monotone;
            d["decay_C"] = r.decay.C;
            d["order_violations"] = r.decay.order_violations;
            return d;
        },
        py::arg("beta") = 0.25, py::arg("A") = py::none(), py::arg("Nx") = 64,
        py::arg("Ny") = 32, py::arg("dt") = py::none(), py::arg("T") = 0.0);
}
