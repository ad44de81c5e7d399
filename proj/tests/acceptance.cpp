/**
 * @file acceptance.cpp
 * @brief End-to-end acceptance checks, one PASS/FAIL line each
 *
 * Exits nonzero when any check fails.
 */

#include "clab/closed_forms.hpp"
#include "clab/errors.hpp"
#include "clab/io.hpp"
#include "clab/pipeline.hpp"
#include "clab/polar_matching.hpp"
#include "clab/timemap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace clab;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
}

std::string f(double v) { return fmt17(v); }

Outcome gamma_rf() {
    const auto t0 = Clock::now();
    const double g = clab::gamma(r_f());
    const double t = seconds_since(t0);
    const double d1 = std::abs(g - 2.09), d2 = std::abs(g - 2.0 * pi / 3.0);
    return {d1 < 2e-2 && d2 < 5e-3 && t < 1.0,
            "gamma(r_F) = " + f(g) + ", |-2.09| = " + f(d1) + ", |-2pi/3| = " + f(d2) +
                ", time " + f(t) + " s"};
}

Outcome gamma_limit() {
    const double g6 = clab::gamma(1e6);
    const double d = std::abs(g6 - pi / 2.0);
    int violations = 0;
    double prev = INFINITY;
    const double lo = std::log(r_f()), hi = std::log(1e6);
    for (int k = 0; k < 50; ++k) {
        const double g = clab::gamma(std::exp(lo + (hi - lo) * k / 49.0));
        if (!(g < prev)) ++violations;
        prev = g;
    }
    return {d < 1e-2 && violations == 0,
            "|gamma(1e6) - pi/2| = " + f(d) + ", monotonicity violations " +
                std::to_string(violations) + " of 49"};
}

Outcome lambda_star_partition() {
    const double R = pi / 2.0, V0 = 1.0;
    const double ls = lambda_star(R), l1 = lambda_one(R);
    std::vector<double> lams;
    for (int k = 0; k <= 200; ++k) lams.push_back(0.25 + 2.0 * k / 200.0);
    lams.push_back(l1);
    lams.push_back(ls);
    std::sort(lams.begin(), lams.end());
    const auto pts = bifurcation_table(V0, R, lams);
    const std::string csv = bifurcation_csv(pts);
    int wrong = 0;
    for (const auto& p : pts) {
        TimeRegime want = p.lambda <= l1   ? TimeRegime::NoSolution
                          : p.lambda < ls  ? TimeRegime::UniquePositive
                          : p.lambda == ls ? TimeRegime::Flat
                                           : TimeRegime::CompactSupportFamily;
        if (p.regime != want) ++wrong;
    }
    const long lines = std::count(csv.begin(), csv.end(), '\n');
    const double d = std::abs(ls - 16.0 / 9.0);
    return {d < 3e-2 && wrong == 0 && lines == long(pts.size()) + 1,
            "lambda*(pi/2) = " + f(ls) + " (|-16/9| = " + f(d) + "), misclassified rows " +
                std::to_string(wrong) + " of " + std::to_string(pts.size())};
}

Outcome flat_norm() {
    const double R = pi / 2.0, V0 = 1.0;
    const double ls = lambda_star(R);
    const auto p = classify(ls, V0, R);
    const double a = std::pow(4.0 * V0 / ls, 2.0 / 3.0);
    const double b = std::pow(V0 / ls, 2.0 / 3.0) * r_f();
    const auto shot = shoot_v2(V0, ls, pi / 2.0);
    const double smax = *std::max_element(shot.v.begin(), shot.v.end());
    const double e1 = std::abs(p.sup_norm - a) / a, e2 = std::abs(p.sup_norm - b) / b;
    const double e3 = std::abs(smax - p.sup_norm);
    return {p.regime == TimeRegime::Flat && e1 <= 1e-12 && e2 <= 1e-12 && e3 < 1e-3,
            "sup = " + f(p.sup_norm) + ", rel err vs (4V0/l*)^(2/3) " + f(e1) + ", vs r_F form " +
                f(e2) + ", shooting max " + f(smax) + " (diff " + f(e3) + ")"};
}

Outcome one_d_suite() {
    const auto t0 = Clock::now();
    const auto flat = flat_solution_1d();
    const double r_flat = residual_1d(flat, [](double) { return 4.0 / 9.0; }, 1001).max_residual;
    const double xi = free_boundary_solution_1d(16.0 / 9.0).xi;
    const auto sub = subcritical_solution_1d(0.2);
    const double slope = sub.derivative(0.0);
    const double h = 1e-3;
    std::vector<double> y, u;
    for (int i = 0; i <= 1000; ++i) {
        y.push_back(i * h);
        u.push_back(sub.value(y.back()));
    }
    const auto fd = residual_1d(y, u, [](double) { return 0.2; }, 4);
    // five-point residual at two interior points, for context
    auto local = [&](int i) {
        const double d2 = (-u[i + 2] + 16 * u[i + 1] - 30 * u[i] + 16 * u[i - 1] - u[i - 2]) / (12 * h * h);
        return std::abs(-d2 + 0.2 / std::sqrt(u[i]));
    };
    const double l1 = lambda_q_star(1.0);
    const auto sq = power_solution_nonautonomous(1.0, l1);
    const double r_sq = residual_1d(sq, [](double s) { return 2.0 * s; }, 1001).max_residual;
    const double t = seconds_since(t0);
    const bool ok = r_flat <= 1e-13 && xi == 0.5 && slope > 0.0 && fd.max_residual < 1e-6 &&
                    l1 == 2.0 && r_sq <= 1e-13 && t < 5.0;
    return {ok, "flat residual " + f(r_flat) + ", xi(16/9) = " + f(xi) + ", u'(0) = " + f(slope) +
                    ", FD residual (h=1e-3) " + f(fd.max_residual) + " at y = " + f(fd.worst_y) +
                    " (" + f(local(100)) + " at y = 0.1, " + f(local(500)) + " at y = 0.5), lambda_1* = " + f(l1) +
                    ", y^2 residual " + f(r_sq) + ", time " + f(t) + " s"};
}

Outcome time_map_profiles() {
    double worst_fi = 0.0, worst_slope = 0.0;
    for (double mu : {r_f(), 3.0, 10.0}) {
        worst_fi = std::max(worst_fi, first_integral_violation(profile(mu, 401)));
        const double want = std::sqrt(2.0) * std::sqrt(std::max(big_f(mu), 0.0));
        worst_slope = std::max(worst_slope, std::abs(boundary_slope_numeric(mu) - want));
    }
    const double R = 1.0, V0 = 1.0, ls = lambda_star(R);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double w = 2.0; w <= 64.0; w *= 2.0) {
        const auto p = compact_support_solution(w * ls, V0, R, 0.0, 2001);
        double g = 0.0;
        for (double d : p.du) g = std::max(g, std::abs(d));
        const double lx = std::log(w), ly = std::log(g);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly, ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {worst_fi < 1e-6 && worst_slope < 1e-6 && std::abs(slope + 1.0 / 6.0) <= 0.02,
            "first integral " + f(worst_fi) + ", boundary slope err " + f(worst_slope) +
                ", sup|u'| log-log slope " + f(slope)};
}

Solve2DResult base2d, fine2d;
bool have2d = false;

Outcome end_to_end() {
    const auto t0 = Clock::now();
    Solve2DOptions o;
    o.beta = 0.25;
    o.Nx = 256;
    o.Ny = 128;
    base2d = run_solve2d(o);
    o.A = base2d.A;
    o.Nx *= 2;
    o.Ny *= 2;
    fine2d = run_solve2d(o);
    have2d = true;
    const double t = seconds_since(t0);
    const auto& r = base2d;
    const bool i = r.order.ok && fine2d.order.ok;
    const bool ii = r.residual < 1e-3 && fine2d.residual < r.residual;
    const bool iii = r.fit_minus.exponent > 1.1 && std::abs(r.fit_plus.exponent - 1.0) <= 0.05;
    const bool iv = r.between.gap < 1e-5;
    const double q0 = r.nondegeneracy.min_ratio, q1 = fine2d.nondegeneracy.min_ratio;
    const bool v = q0 > 0.0 && q1 > 0.0 && std::abs(q1 / q0 - 1.0) < 0.1;
    auto yn = [](bool b) { return b ? "ok" : "fail"; };
    std::ostringstream d;
    d << "A = " << f(r.A) << "; (i) " << yn(i) << " worst " << f(r.order.worst) << "; (ii) "
      << yn(ii) << " residual " << f(r.residual) << " -> " << f(fine2d.residual) << "; (iii) "
      << yn(iii) << " fits " << f(r.fit_minus.exponent) << ", " << f(r.fit_plus.exponent)
      << "; (iv) " << yn(iv) << " gap " << f(r.between.gap) << "; (v) " << yn(v) << " ratio "
      << f(q0) << " -> " << f(q1) << "; time " << f(t) << " s";
    return {i && ii && iii && iv && v && t < 120.0, d.str()};
}

Outcome wings() {
    const std::vector<double> betas = {0.0, 0.25};
    double A = INFINITY;
    for (double b : betas) A = std::min(A, feasible_amplitude(b, 1.0, 1.0));
    A *= kDefaultAmplitudeFraction;
    const Grid2D base(1.0, 1.0, 128, 64);
    const auto rows = wings_experiment(base, A, betas, 3, subsolution_floor(A));
    std::vector<double> flat, sing;
    for (const auto& r : rows) (r.beta == 0.0 ? flat : sing).push_back(r.beta == 0.0 ? r.min_cathode_flux : r.flux_mid);
    const double fmin = *std::min_element(flat.begin(), flat.end());
    const bool bounded = fmin > 0.0 && flat.back() >= 0.5 * flat.front();
    bool decays = true;
    std::ostringstream d;
    d << "A = " << f(A) << "; beta=0 min flux";
    for (double v : flat) d << " " << f(v);
    d << "; beta=0.25 flux(-0.5)";
    for (double v : sing) d << " " << f(v);
    d << "; ratios";
    for (std::size_t k = 1; k < sing.size(); ++k) {
        const double q = sing[k - 1] / sing[k];
        decays = decays && q >= 1.5;
        d << " " << f(q);
    }
    return {bounded && decays, d.str()};
}

Outcome parabolic() {
    ParabolicOptions o;
    o.Nx = 64;
    o.Ny = 32;
    const auto r = run_parabolic(o);
    const auto& d = r.decay;
    const double dist = r.to_limit.distance.back();
    const bool ok = r.steps >= 10000 && d.order_violations == 0 && d.max_reverse == 0.0 &&
                    r.distance_monotone && dist < 1e-3 && d.bounded && std::isfinite(d.C);
    return {ok, "steps " + std::to_string(r.steps) + ", dt " + f(r.dt) + ", order violations " +
                    std::to_string(d.order_violations) + ", distance " +
                    f(r.to_limit.distance.front()) + " -> " + f(dist) +
                    (r.distance_monotone ? " nonincreasing" : " NOT monotone") + ", C = " +
                    f(d.C) + " (gamma " + f(d.gamma) + ")"};
}

Outcome matching() {
    AssemblyReport rep;
    const auto U = find_subsolution(0.25, default_eps_list(), &rep);
    const double A = kDefaultAmplitudeFraction * max_amplitude(U, 1.0, 1.0);
    const auto s = make_subsolution(U, A);
    std::vector<std::pair<double, double>> pts, nrm;
    for (int k = 1; k < 200; ++k) {
        pts.push_back({0.0, k / 200.0});
        nrm.push_back({1.0, 0.0});
    }
    const auto jx = verify_interface_jump([&](double x, double y) { return s.minus_side(x, y); },
                                          [&](double x, double y) { return s.plus_side(x, y); },
                                          pts, nrm, Sense::Sub, 1e-9, 1e-7);
    bool junctions = rep.jumps.size() == 2;
    double jmin = INFINITY;
    for (const auto& j : rep.jumps) {
        junctions = junctions && j.jump >= 0.0;
        jmin = std::min(jmin, j.jump);
    }
    const Grid2D g(1.0, 1.0, 256, 128);
    const auto sup = build_supersolution(A, 0.25, 1.0, 1.0, g);
    const auto sup0 = build_supersolution(A, 0.0, 1.0, 1.0, g);
    const double margin = sup0.robin_rhs - sup0.robin_lhs;
    const double merr = std::abs(margin - (4.0 / 3.0) / std::sqrt(3.0));
    return {jx.ok && junctions && sup.ray_jump.ok && merr < 1e-9,
            "sub x=0 jump worst " + f(jx.worst_margin) + ", junction jumps min " + f(jmin) +
                ", super theta_b jump worst " + f(sup.ray_jump.worst_margin) +
                ", Robin margin at 4/3 " + f(margin) + " (err " + f(merr) + ")"};
}

}  // namespace

int main() {
    report(1, "time map at r_F", gamma_rf);
    report(2, "time map limit", gamma_limit);
    report(3, "critical lambda and regimes", lambda_star_partition);
    report(4, "flat norm identity", flat_norm);
    report(5, "1D suite", one_d_suite);
    report(6, "time map profiles", time_map_profiles);
    report(7, "2D end-to-end", end_to_end);
    report(8, "wings", wings);
    report(9, "parabolic", parabolic);
    report(10, "matching verifiers", matching);
    std::printf("%d of 10 failed\n", failures);
    return failures == 0 ? 0 : 1;
}
