/**
 * @file timemap.cpp
 * @brief Time map quadrature, inversion, profiles and regime classification
 *
 * F(mu) - F(r) is factored as (mu - r) g(mu, r) with
 *   g = (mu + r)/2 - 2/(sqrt(mu) + sqrt(r)),
 * which avoids cancellation near r = mu. The r = mu end is handled by r = mu - s^2
 * and the r = 0 end by r = t^4; g(mu, 0) vanishes only at mu = r_F, where the
 * t^4 substitution turns the r^{-1/4} singularity into a smooth integrand.
 */

#include "clab/timemap.hpp"

#include "clab/errors.hpp"
#include "clab/io.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace clab {

namespace {

using boost::math::double_constants::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

double g_factor(double mu, double r) {
    return std::max(0.5 * (mu + r) - 2.0 / (std::sqrt(mu) + std::sqrt(r)), 0.0);
}

double integrate(const auto& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    // tolerances below ~1e-13 only make the adaptive recursion accumulate roundoff
    const double t = std::max(tol, 2e-13);
    double err = 0.0;
    double v = GK::integrate(f, a, b, 15, t, &err);
    if (!(err <= std::max(1e3 * t, 1e-9) * std::max(1.0, std::abs(v))) || !std::isfinite(v))
        throw NumericError("time map quadrature: estimate " + fmt17(v) + ", error " + fmt17(err));
    return v;
}

}  // namespace

std::string to_string(TimeRegime r) {
    switch (r) {
        case TimeRegime::NoSolution: return "NoSolution";
        case TimeRegime::UniquePositive: return "UniquePositive";
        case TimeRegime::Flat: return "Flat";
        case TimeRegime::CompactSupportFamily: return "CompactSupportFamily";
    }
    return "Unknown";
}

double big_f(double r) {
    if (!(r >= 0.0)) throw DomainError("big_f: r must be nonnegative");
    return 0.5 * r * r - 2.0 * std::sqrt(r);
}

double r_f() { return 2.0 * std::cbrt(2.0); }

double time_integral(double mu, double lo, double hi, double tol) {
    if (!(mu >= r_f() * (1.0 - 1e-15)))
        throw DomainError("time_integral: mu must be >= r_F, got " + fmt17(mu));
    if (!(lo >= 0.0 && lo <= hi && hi <= mu))
        throw DomainError("time_integral: need 0 <= lo <= hi <= mu");
    const double mid = 0.5 * mu;
    double total = 0.0;
    if (lo < mid) {
        const double b = std::min(hi, mid);
        // r = t^4, dr = 4 t^3 dt; 1/sqrt(F(mu)-F(r)) = 1/sqrt((mu-r) g)
        auto f = [mu](double t) {
            const double t2 = t * t;
            const double r = t2 * t2;
            const double d = (mu - r) * g_factor(mu, r);
            return d > 0.0 ? 4.0 * t2 * t / std::sqrt(d) : 0.0;
        };
        total += integrate(f, std::sqrt(std::sqrt(lo)), std::sqrt(std::sqrt(b)), tol);
    }
    if (hi > mid) {
        const double a = std::max(lo, mid);
        // r = mu - s^2, dr = -2 s ds; the s factors cancel against sqrt(mu - r)
        auto f = [mu](double s) { return 2.0 / std::sqrt(g_factor(mu, mu - s * s)); };
        total += integrate(f, std::sqrt(mu - hi), std::sqrt(mu - a), tol);
    }
    return total / std::sqrt(2.0);
}

double gamma(double mu, double tol) { return time_integral(mu, 0.0, mu, tol); }

double gamma_inverse(double L, double tol) {
    if (!(L > 0.5 * pi))
        throw RegimeError("gamma_inverse: L = " + fmt17(L) + " <= pi/2 (NoSolution)");
    const double rf = r_f();
    const double gf = gamma(rf);
    if (L > gf * (1.0 + 1e-14))
        throw RegimeError("gamma_inverse: L = " + fmt17(L) + " > gamma(r_F) (CompactSupportFamily)");
    if (L >= gf) return rf;
    double lo = rf;
    double hi = 2.0 * rf;
    for (int k = 0; gamma(hi) >= L; ++k) {
        if (k > 200) throw NumericError("gamma_inverse: upper bracket not found");
        lo = hi;
        hi *= 2.0;
    }
    // gamma decreasing: gamma(lo) >= L > gamma(hi)
    for (int k = 0; k < 400 && hi - lo > tol * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (gamma(mid) >= L)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double lambda_one(double R) {
    if (!(R > 0.0)) throw DomainError("lambda_one: R must be positive");
    return std::pow(pi / (2.0 * R), 2);
}

double lambda_star(double R) {
    if (!(R > 0.0)) throw DomainError("lambda_star: R must be positive");
    const double g = gamma(r_f());
    return g * g / (R * R);
}

TimeMapPoint classify(double lambda, double V0, double R, double tol) {
    if (!(lambda > 0.0 && V0 > 0.0 && R > 0.0))
        throw DomainError("classify: lambda, V0, R must be positive");
    TimeMapPoint p;
    p.lambda = lambda;
    p.V0 = V0;
    p.R = R;
    p.L = std::sqrt(lambda) * R;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double l1 = lambda_one(R);
    const double ls = lambda_star(R);
    if (lambda <= l1) {
        p.regime = TimeRegime::NoSolution;
        p.mu = nan;
        p.sup_norm = nan;
    } else if (std::abs(lambda / ls - 1.0) <= tol) {
        p.regime = TimeRegime::Flat;
        p.mu = r_f();
        p.sup_norm = std::pow(4.0 * V0 / ls, 2.0 / 3.0);
    } else if (lambda < ls) {
        p.regime = TimeRegime::UniquePositive;
        p.mu = gamma_inverse(p.L);
        p.sup_norm = std::pow(V0 / lambda, 2.0 / 3.0) * p.mu;
    } else {
        p.regime = TimeRegime::CompactSupportFamily;
        p.mu = r_f();
        p.sup_norm = std::pow(ls / lambda, 2.0 / 3.0) * std::pow(4.0 * V0 / ls, 2.0 / 3.0);
    }
    return p;
}

namespace {

// u(x) for 0 < |x| < L: Newton on the implicit relation, safeguarded by the bisection bracket [0, mu]
double profile_value_impl(double mu, double L, double x, double tol) {
    const double ax = std::abs(x);
    if (ax == 0.0) return mu;
    if (ax >= L) return 0.0;
    const double fm = big_f(mu);
    auto f = [&](double u) {
        const double slope = std::sqrt(2.0 * std::max(fm - big_f(u), 0.0));
        const double d = slope > 0.0 ? -1.0 / slope : -std::numeric_limits<double>::max();
        return std::make_pair(time_integral(mu, u, mu) - ax, d);
    };
    const int bits = std::clamp(static_cast<int>(-std::log2(std::max(tol, 1e-16))), 8, 50);
    std::uintmax_t it = 200;
    const double guess = mu * (1.0 - ax / L);
    const double u = boost::math::tools::newton_raphson_iterate(f, guess, 0.0, mu, bits, it);
    if (!std::isfinite(u) || it >= 200)
        throw NumericError("profile_value: root finder failed at x = " + fmt17(x));
    return u;
}

}  // namespace

double profile_value(double mu, double x, double tol) {
    return profile_value_impl(mu, gamma(mu), x, tol);
}

namespace {

double first_integral_slope(double mu, double u, double x) {
    const double d = std::max(big_f(mu) - big_f(u), 0.0);
    return (x > 0.0 ? -1.0 : 1.0) * std::sqrt(2.0 * d);
}

}  // namespace

RenormProfile profile(double mu, int n, double tol) {
    if (!(mu >= r_f() * (1.0 - 1e-15))) throw DomainError("profile: mu must be >= r_F");
    if (n < 3) throw DomainError("profile: n must be >= 3");
    RenormProfile p;
    p.mu = mu;
    p.L = gamma(mu);
    p.x.resize(n);
    p.u.resize(n);
    p.du.resize(n);
    for (int i = 0; i < n; ++i) p.x[i] = -p.L + 2.0 * p.L * i / (n - 1);
    for (int i = n - 1; 2 * i >= n - 1; --i) {
        const int m = n - 1 - i;
        if (2 * i == n - 1) p.x[i] = 0.0;
        p.x[m] = -p.x[i];
        double u = (i == n - 1) ? 0.0 : profile_value_impl(mu, p.L, p.x[i], tol);
        p.u[i] = p.u[m] = u;
        p.du[i] = first_integral_slope(mu, u, p.x[i]);
        p.du[m] = -p.du[i];
    }
    return p;
}

RenormProfile rescale_to_physical(const RenormProfile& prof, double lambda, double V0) {
    if (!(lambda > 0.0 && V0 > 0.0)) throw DomainError("rescale_to_physical: lambda, V0 > 0");
    const double amp = std::pow(V0 / lambda, 2.0 / 3.0);
    const double sl = std::sqrt(lambda);
    RenormProfile p = prof;
    p.mu = amp * prof.mu;
    p.L = prof.L / sl;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        p.x[i] = prof.x[i] / sl;
        p.u[i] = amp * prof.u[i];
        p.du[i] = amp * sl * prof.du[i];
    }
    return p;
}

RenormProfile compact_support_solution(double lambda, double V0, double R, double z, int n) {
    if (!(V0 > 0.0 && R > 0.0 && n >= 3)) throw DomainError("compact_support_solution: bad input");
    const double ls = lambda_star(R);
    if (!(lambda >= ls))
        throw RegimeError("compact_support_solution: needs lambda > lambda*(R) = " + fmt17(ls));
    const double omega = lambda / ls;
    const double zmax = R * (std::sqrt(omega) - 1.0);
    if (std::abs(z) > zmax * (1.0 + 1e-12))
        throw DomainError("compact_support_solution: shift z = " + fmt17(z) +
                          " outside admissible [" + fmt17(-zmax) + ", " + fmt17(zmax) + "]");
    const double rf = r_f();
    const double gf = gamma(rf);
    const double amp = std::pow(V0 / ls, 2.0 / 3.0) * std::pow(omega, -2.0 / 3.0);
    const double sls = std::sqrt(ls);
    const double so = std::sqrt(omega);
    RenormProfile p;
    p.L = R;
    p.x.resize(n);
    p.u.resize(n);
    p.du.resize(n);
    p.mu = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -R + 2.0 * R * i / (n - 1);
        // flat profile on (-R, R) evaluated at sqrt(omega) x - z, renormalized by sqrt(lambda*)
        const double xr = sls * (so * x - z);
        double u = 0.0, du = 0.0;
        if (std::abs(xr) < gf) {
            u = profile_value_impl(rf, gf, xr, 1e-15);
            du = first_integral_slope(rf, u, xr);
        }
        p.x[i] = x;
        p.u[i] = amp * u;
        p.du[i] = amp * sls * so * du;
        p.mu = std::max(p.mu, p.u[i]);
    }
    return p;
}

double boundary_slope_numeric(double mu) {
    const double u = 1e-32 * mu;
    return u / time_integral(mu, 0.0, u);
}

double first_integral_violation(const RenormProfile& prof, double tol) {
    const double fm = big_f(prof.mu);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.x.size(); ++i) {
        const double x = prof.x[i];
        const double d = prof.L - std::abs(x);
        if (d <= 0.0) continue;
        // step well inside the distance to the support end; Richardson on two steps
        const double h = 1e-3 * d;
        auto cd = [&](double s) {
            return (profile_value_impl(prof.mu, prof.L, x + s, tol) -
                    profile_value_impl(prof.mu, prof.L, x - s, tol)) /
                   (2.0 * s);
        };
        const double du = (4.0 * cd(0.5 * h) - cd(h)) / 3.0;
        const double v = std::abs(0.5 * du * du - fm + big_f(prof.u[i])) / (1.0 + std::abs(fm));
        worst = std::max(worst, v);
    }
    return worst;
}

std::vector<TimeMapPoint> bifurcation_table(double V0, double R, const std::vector<double>& lambdas) {
    std::vector<TimeMapPoint> out;
    out.reserve(lambdas.size());
    for (double l : lambdas) out.push_back(classify(l, V0, R));
    return out;
}

std::string bifurcation_csv(const std::vector<TimeMapPoint>& pts) {
    std::ostringstream os;
    os << "lambda,sup_norm,regime\n";
    for (const auto& p : pts)
        os << fmt17(p.lambda) << "," << fmt17(p.sup_norm) << "," << to_string(p.regime) << "\n";
    return os.str();
}

}  // namespace clab
