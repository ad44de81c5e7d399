/**
 * @file timemap.hpp
 * @brief Time map of -U'' + V0/sqrt(U) = lambda U on (-R, R), U(+-R) = 0
 *
 * In renormalized form -u'' + 1/sqrt(u) = u on (-L, L) with L = sqrt(lambda) R.
 * A positive solution with maximum mu exists iff gamma(mu) = L, where
 *   gamma(mu) = (1/sqrt 2) int_0^mu dr / sqrt(F(mu) - F(r)),  F(r) = r^2/2 - 2 sqrt(r).
 */
#pragma once

#include <string>
#include <vector>

namespace clab {

enum class TimeRegime { NoSolution, UniquePositive, Flat, CompactSupportFamily };

std::string to_string(TimeRegime r);

struct TimeMapPoint {
    double mu = 0.0;  ///< renormalized sup-norm (nan when no solution)
    double L = 0.0;   ///< sqrt(lambda) R
    TimeRegime regime = TimeRegime::NoSolution;
    double lambda = 0.0;
    double V0 = 0.0;
    double R = 0.0;
    double sup_norm = 0.0;  ///< physical sup-norm (nan when no solution)
};

struct RenormProfile {
    double mu = 0.0;  ///< sup-norm of the samples
    double L = 0.0;   ///< half-length of the sampled interval
    std::vector<double> x;
    std::vector<double> u;
    std::vector<double> du;  ///< u' from the first integral
};

double big_f(double r);
/// Zero of F: r_F = 2 * 2^{1/3}.
double r_f();

/// (1/sqrt 2) int_lo^hi dr / sqrt(F(mu) - F(r)) for 0 <= lo <= hi <= mu.
double time_integral(double mu, double lo, double hi, double tol = 1e-14);
double gamma(double mu, double tol = 1e-14);
double gamma_inverse(double L, double tol = 1e-13);

double lambda_star(double R);
/// First Dirichlet eigenvalue (pi / 2R)^2.
double lambda_one(double R);

TimeMapPoint classify(double lambda, double V0, double R, double tol = 1e-12);

/// u(x) of the renormalized profile with maximum mu, by bisection on the implicit relation.
double profile_value(double mu, double x, double tol = 1e-15);
RenormProfile profile(double mu, int n, double tol = 1e-15);
RenormProfile rescale_to_physical(const RenormProfile& prof, double lambda, double V0);
RenormProfile compact_support_solution(double lambda, double V0, double R, double z, int n);

/// Boundary slope |u'(L)| estimated as u / (L - x(u)) at a tiny level u.
double boundary_slope_numeric(double mu);

/// max |u'^2/2 - F(mu) + F(u)| / (1 + |F(mu)|) over interior samples,
/// u' by local central differences of the implicit relation.
double first_integral_violation(const RenormProfile& prof, double tol = 1e-15);

std::vector<TimeMapPoint> bifurcation_table(double V0, double R, const std::vector<double>& lambdas);
std::string bifurcation_csv(const std::vector<TimeMapPoint>& pts);

}  // namespace clab
