/**
 * @file closed_forms.hpp
 * @brief Exact and semi-analytic 1D Child-Langmuir profiles
 *
 * Problem: -u'' + j(y)/sqrt(u) = 0 on (0,1), u(0) = 0, u(1) = 1.
 * Autonomous case j constant, non-autonomous case j(y) = lambda*y^q.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace clab {

enum class Regime1D { Flat, FreeBoundary, Subcritical };

std::string to_string(Regime1D r);

struct ClosedForm1D {
    Regime1D regime = Regime1D::Flat;
    double j_amplitude = 4.0 / 9.0;  ///< j, or lambda in the power-law family
    double q_exponent = 0.0;
    double xi = 0.0;
    double amp = 1.0;
    std::optional<std::pair<double, double>> h_constants;  ///< (A0, B0), subcritical only
    bool is_subsolution = false;  ///< power-law family below lambda_q*
    double sub_eps = 0.0;

    /// Exponent of the power profile, (4+2q)/3.
    double exponent() const;
    double value(double y) const;
    double derivative(double y) const;
    /// Analytic u''; only meaningful where u > 0.
    double second_derivative(double y) const;
    /// Coefficient the profile solves with: j (autonomous) or lambda*(y-xi)^q.
    double coefficient(double y) const;
};

double h_integral(double sigma, double tol = 1e-14);
double h_inverse(double tau, double tol = 1e-14);

ClosedForm1D flat_solution_1d();
ClosedForm1D free_boundary_solution_1d(double j);
ClosedForm1D subcritical_solution_1d(double j, double tol = 1e-13);

double lambda_q_star(double q);
/// C_q(lambda) = [9 lambda / (2(1+2q)(2+q))]^{2/3}
double power_coefficient(double q, double lambda);
ClosedForm1D power_solution_nonautonomous(double q, double lambda);

struct ResidualReport {
    double max_residual = 0.0;
    double worst_y = 0.0;
    std::vector<double> excluded;  ///< points where u = 0
};

/// max |-u'' + j(y)/sqrt(u)| over interior points of a uniform grid, analytic u''.
ResidualReport residual_1d(const ClosedForm1D& sol,
                           const std::function<double(double)>& j_fun,
                           int n_points);

/// Same on a sampled uniform profile with finite-difference u''.
/// order 2 uses the three-point stencil; order 4 the five-point one (three-point next to the ends).
ResidualReport residual_1d(const std::vector<double>& y, const std::vector<double>& u,
                           const std::function<double(double)>& j_fun, int order = 4);

std::string profile_csv(const ClosedForm1D& sol, int n_points);

}  // namespace clab
