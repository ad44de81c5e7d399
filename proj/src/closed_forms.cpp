/**
 * @file closed_forms.cpp
 * @brief 1D flat, free-boundary, subcritical and power-law profiles
 */

#include "clab/closed_forms.hpp"

#include "clab/errors.hpp"
#include "clab/io.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace clab {

namespace {

constexpr double kFourNinths = 4.0 / 9.0;

int bits_for(double tol) {
    int b = static_cast<int>(std::ceil(-std::log2(std::max(tol, 1e-16))));
    return std::clamp(b, 8, std::numeric_limits<double>::digits - 2);
}

double hprime(double sigma) { return 1.0 / std::sqrt(std::sqrt(sigma) + 1.0); }

}  // namespace

std::string to_string(Regime1D r) {
    switch (r) {
        case Regime1D::Flat: return "Flat";
        case Regime1D::FreeBoundary: return "FreeBoundary";
        case Regime1D::Subcritical: return "Subcritical";
    }
    return "Unknown";
}

double h_integral(double sigma, double tol) {
    if (!(sigma >= 0.0)) throw DomainError("h_integral: sigma must be nonnegative");
    if (sigma == 0.0) return 0.0;
    // s = t^2 removes the sqrt(s) kink at the origin
    auto f = [](double t) { return 2.0 * t / std::sqrt(t + 1.0); };
    const double t = std::max(tol, 2e-13);
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, 0.0, std::sqrt(sigma), 15, t, &err);
    if (!(err <= std::max(1e3 * t, 1e-9) * std::max(1.0, v)))
        throw NumericError("h_integral: quadrature error estimate " + fmt17(err));
    return v;
}

double h_inverse(double tau, double tol) {
    if (!(tau >= 0.0)) throw DomainError("h_inverse: tau must be nonnegative");
    if (tau == 0.0) return 0.0;
    // H(s) <= s gives the lower bracket
    double lo = tau;
    double hi = 2.0 * tau;
    while (h_integral(hi, tol) < tau) hi *= 2.0;
    std::uintmax_t it = 200;
    auto f = [&](double s) { return std::make_pair(h_integral(s, tol) - tau, hprime(s)); };
    double guess = std::clamp(std::pow(0.75 * tau, 4.0 / 3.0), lo, hi);
    return boost::math::tools::newton_raphson_iterate(f, guess, lo, hi, bits_for(tol), it);
}

double ClosedForm1D::exponent() const { return (4.0 + 2.0 * q_exponent) / 3.0; }

double ClosedForm1D::value(double y) const {
    if (regime == Regime1D::Subcritical && h_constants) {
        auto [a0, b0] = *h_constants;
        return h_inverse(b0 * y) / a0;
    }
    const double p = exponent();
    if (is_subsolution) return (std::pow(y, p) + sub_eps * y) / (1.0 + sub_eps);
    if (y <= xi) return 0.0;
    return amp * std::pow(y - xi, p);
}

double ClosedForm1D::derivative(double y) const {
    if (regime == Regime1D::Subcritical && h_constants) {
        auto [a0, b0] = *h_constants;
        double sigma = h_inverse(b0 * y);
        return b0 / a0 / hprime(sigma);
    }
    const double p = exponent();
    if (is_subsolution) return (p * std::pow(y, p - 1.0) + sub_eps) / (1.0 + sub_eps);
    if (y <= xi) return 0.0;
    return amp * p * std::pow(y - xi, p - 1.0);
}

double ClosedForm1D::second_derivative(double y) const {
    if (regime == Regime1D::Subcritical && h_constants) {
        auto [a0, b0] = *h_constants;
        return b0 * b0 / (4.0 * std::pow(a0, 1.5)) / std::sqrt(value(y));
    }
    const double p = exponent();
    if (is_subsolution) return p * (p - 1.0) * std::pow(y, p - 2.0) / (1.0 + sub_eps);
    if (y <= xi) return 0.0;
    return amp * p * (p - 1.0) * std::pow(y - xi, p - 2.0);
}

double ClosedForm1D::coefficient(double y) const {
    if (q_exponent == 0.0) return j_amplitude;
    if (is_subsolution) return j_amplitude * std::pow(y, q_exponent);
    return j_amplitude * std::pow(std::max(y - xi, 0.0), q_exponent);
}

ClosedForm1D flat_solution_1d() {
    ClosedForm1D s;
    s.regime = Regime1D::Flat;
    s.j_amplitude = kFourNinths;
    return s;
}

ClosedForm1D free_boundary_solution_1d(double j) {
    if (!(j > kFourNinths))
        throw RegimeError("free_boundary_solution_1d: needs j > 4/9, got " + fmt17(j));
    ClosedForm1D s;
    s.regime = Regime1D::FreeBoundary;
    s.j_amplitude = j;
    s.xi = 1.0 - 1.0 / std::sqrt(9.0 * j / 4.0);
    s.amp = std::pow(9.0 * j / 4.0, 2.0 / 3.0);
    return s;
}

ClosedForm1D subcritical_solution_1d(double j, double tol) {
    if (!(j > 0.0 && j < kFourNinths))
        throw RegimeError("subcritical_solution_1d: needs 0 < j < 4/9, got " + fmt17(j));
    const double target = 2.0 * std::sqrt(j);
    // H(s)/s^{3/4} rises from 0 to 4/3
    auto g = [&](double s) { return h_integral(s) / std::pow(s, 0.75) - target; };
    double lo = 1.0, hi = 1.0;
    for (int k = 0; g(lo) > 0.0; ++k) {
        if (k > 200) throw NumericError("subcritical_solution_1d: lower bracket not found");
        lo *= 0.5;
    }
    for (int k = 0; g(hi) < 0.0; ++k) {
        if (k > 200)
            throw NumericError("subcritical_solution_1d: upper bracket not found, hi=" + fmt17(hi));
        hi *= 2.0;
    }
    std::uintmax_t it = 400;
    auto r = boost::math::tools::bisect(g, lo, hi,
                                        boost::math::tools::eps_tolerance<double>(bits_for(tol)), it);
    if (it >= 400)
        throw NumericError("subcritical_solution_1d: bisection stalled in [" + fmt17(r.first) +
                           ", " + fmt17(r.second) + "]");
    const double a0 = 0.5 * (r.first + r.second);
    ClosedForm1D s;
    s.regime = Regime1D::Subcritical;
    s.j_amplitude = j;
    s.amp = 1.0;
    s.h_constants = std::make_pair(a0, h_integral(a0));
    return s;
}

double lambda_q_star(double q) {
    // closed at 1 so that u = y^2 with j = 2y is covered
    if (!(q > -0.5 && q <= 1.0))
        throw DomainError("lambda_q_star: q must lie in (-1/2, 1], got " + fmt17(q));
    return 2.0 * (1.0 + 2.0 * q) * (2.0 + q) / 9.0;
}

double power_coefficient(double q, double lambda) {
    return std::pow(lambda / lambda_q_star(q), 2.0 / 3.0);
}

ClosedForm1D power_solution_nonautonomous(double q, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("power_solution_nonautonomous: lambda must be positive");
    const double ls = lambda_q_star(q);
    ClosedForm1D s;
    s.q_exponent = q;
    s.j_amplitude = lambda;
    const double ratio = lambda / ls;
    if (std::abs(ratio - 1.0) <= 1e-14) {
        s.regime = Regime1D::Flat;
        s.amp = 1.0;
    } else if (ratio > 1.0) {
        s.regime = Regime1D::FreeBoundary;
        s.xi = 1.0 - std::pow(ratio, -1.0 / (2.0 + q));
        s.amp = std::pow(ratio, 2.0 / 3.0);
    } else {
        s.regime = Regime1D::Subcritical;
        s.is_subsolution = true;
        s.sub_eps = (std::pow(1.0 / ratio, 2.0 / 3.0) - 1.0) / 2.0;
        s.amp = 1.0;
    }
    return s;
}

ResidualReport residual_1d(const ClosedForm1D& sol, const std::function<double(double)>& j_fun,
                           int n_points) {
    if (n_points < 3) throw DomainError("residual_1d: need at least 3 points");
    ResidualReport rep;
    const double h = 1.0 / (n_points - 1);
    for (int i = 1; i < n_points - 1; ++i) {
        const double y = i * h;
        const double u = sol.value(y);
        if (!(u > 0.0)) {
            rep.excluded.push_back(y);
            continue;
        }
        const double r = std::abs(-sol.second_derivative(y) + j_fun(y) / std::sqrt(u));
        if (r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst_y = y;
        }
    }
    return rep;
}

ResidualReport residual_1d(const std::vector<double>& y, const std::vector<double>& u,
                           const std::function<double(double)>& j_fun, int order) {
    const std::size_t n = y.size();
    if (n < 3 || u.size() != n) throw DomainError("residual_1d: need matching samples, n >= 3");
    if (order != 2 && order != 4) throw DomainError("residual_1d: order must be 2 or 4");
    const double h = y[1] - y[0];
    ResidualReport rep;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(u[i] > 0.0)) {
            rep.excluded.push_back(y[i]);
            continue;
        }
        double upp;
        if (order == 4 && i >= 2 && i + 2 < n)
            upp = (-u[i + 2] + 16.0 * u[i + 1] - 30.0 * u[i] + 16.0 * u[i - 1] - u[i - 2]) /
                  (12.0 * h * h);
        else
            upp = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        const double r = std::abs(-upp + j_fun(y[i]) / std::sqrt(u[i]));
        if (r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst_y = y[i];
        }
    }
    return rep;
}

std::string profile_csv(const ClosedForm1D& sol, int n_points) {
    std::ostringstream os;
    os << "# regime=" << to_string(sol.regime) << " j=" << fmt17(sol.j_amplitude)
       << " q=" << fmt17(sol.q_exponent) << "\n";
    os << "y,u\n";
    for (int i = 0; i < n_points; ++i) {
        const double y = static_cast<double>(i) / (n_points - 1);
        os << fmt17(y) << "," << fmt17(sol.value(y)) << "\n";
    }
    return os.str();
}

}  // namespace clab
