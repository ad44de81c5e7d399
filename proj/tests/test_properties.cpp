#include "doctest.h"

#include "clab/closed_forms.hpp"
#include "clab/elliptic2d.hpp"
#include "clab/parabolic.hpp"
#include "clab/pipeline.hpp"
#include "clab/polar_matching.hpp"
#include "clab/timemap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace clab;

namespace {

constexpr int kTrials = 12;

std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611ull);
    return gen;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace

TEST_CASE("discrete comparison principle for the five-point operator") {
    const Grid2D g(1.0, 1.0, 24, 16);
    for (int t = 0; t < kTrials; ++t) {
        std::vector<double> f1(g.nodes()), f2(g.nodes());
        Field2D b1(g), b2(g);
        for (std::size_t k = 0; k < g.nodes(); ++k) {
            f2[k] = uniform(-5.0, 5.0);
            f1[k] = f2[k] + uniform(0.0, 1.0);
            b2.u[k] = uniform(-1.0, 1.0);
            b1.u[k] = b2.u[k] + uniform(0.0, 0.5);
        }
        const auto u1 = poisson_solve(g, f1, b1);
        const auto u2 = poisson_solve(g, f2, b2);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.nodes(); ++k) worst = std::min(worst, u1.u[k] - u2.u[k]);
        CHECK(worst >= -1e-12);
    }
}

TEST_CASE("monotone limits are ordered and bracketed") {
    const Grid2D g(1.0, 1.0, 32, 16);
    for (int t = 0; t < kTrials / 2; ++t) {
        const double beta = uniform(0.0, 0.25);
        const double A = uniform(0.1, 0.99) * feasible_amplitude(beta, 1.0, 1.0);
        const auto jbar = cell_averaged_j(CurrentDensity{A, beta, 1.0, std::nullopt}, g);
        const Field2D sub = subsolution_field(g, A, beta);
        const auto r = solve_between(g, jbar, sub, linear_field(g));
        CHECK(r.from_below.converged);
        CHECK(r.from_above.converged);
        for (int j = 1; j < g.Ny; ++j)
            for (int i = 1; i < g.Nx; ++i) {
                CHECK(r.u_min(i, j) <= r.u_max(i, j) + 1e-12);
                CHECK(sub(i, j) <= r.u_min(i, j) + 1e-12);
                CHECK(r.u_max(i, j) <= g.y(j) + 1e-12);
            }
        CHECK(r.gap < 1e-6);
    }
}

TEST_CASE("scheme step preserves order") {
    const Grid2D g(1.0, 1.0, 32, 16);
    const double A = 0.5 * feasible_amplitude(0.25, 1.0, 1.0);
    const auto jbar = cell_averaged_j(CurrentDensity{A, 0.25, 1.0, std::nullopt}, g);
    const Field2D floor = subsolution_field(g, A, 0.25);
    const double dt = dt_bounds(g, jbar, floor).safe();
    const ImexStepper st(g, dt, jbar, floor);
    for (int t = 0; t < kTrials; ++t) {
        Field2D lo(g), hi(g);
        for (std::size_t k = 0; k < g.nodes(); ++k) {
            lo.u[k] = uniform(0.0, 1.0);
            hi.u[k] = lo.u[k] + uniform(0.0, 0.3);
        }
        const auto a = st.step(lo), b = st.step(hi);
        double worst = 0.0;
        for (std::size_t k = 0; k < g.nodes(); ++k) worst = std::min(worst, b.u[k] - a.u[k]);
        CHECK(worst >= -1e-12);
    }
}

TEST_CASE("free boundary profiles solve the 1D problem") {
    for (int t = 0; t < kTrials; ++t) {
        const double j = uniform(4.0 / 9.0 + 1e-3, 20.0);
        const auto s = free_boundary_solution_1d(j);
        CHECK(s.xi == doctest::Approx(1.0 - 1.0 / std::sqrt(9.0 * j / 4.0)).epsilon(1e-14));
        CHECK(s.value(1.0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(s.value(0.5 * s.xi) == 0.0);
        const auto r = residual_1d(s, [j](double) { return j; }, 400);
        CHECK(r.max_residual < 1e-9 * (1.0 + j));
    }
}

TEST_CASE("power law flat profiles have zero residual") {
    for (int t = 0; t < kTrials; ++t) {
        const double q = uniform(-0.49, 0.99);
        const double lam = lambda_q_star(q);
        CHECK(lam == doctest::Approx(2.0 * (1.0 + 2.0 * q) * (2.0 + q) / 9.0).epsilon(1e-15));
        const auto s = power_solution_nonautonomous(q, lam);
        CHECK(s.regime == Regime1D::Flat);
        const auto r = residual_1d(s, [q, lam](double y) { return lam * std::pow(y, q); }, 200);
        CHECK(r.max_residual < 1e-11);
    }
}

TEST_CASE("time map decreases and profiles peak at mu") {
    for (int t = 0; t < kTrials; ++t) {
        const double m1 = r_f() * std::exp(uniform(0.0, 5.0));
        const double m2 = m1 * std::exp(uniform(0.01, 1.0));
        CHECK(clab::gamma(m1) > clab::gamma(m2));
        CHECK(clab::gamma(m2) > std::acos(0.0));
        CHECK(profile_value(m1, 0.0) == doctest::Approx(m1).epsilon(1e-12));
    }
}

TEST_CASE("angular subsolution is homogeneous") {
    for (int t = 0; t < 4; ++t) {
        const double beta = uniform(0.0, 0.2);
        const auto U = find_subsolution(beta, default_eps_list());
        const auto s = make_subsolution(U, 0.5 * max_amplitude(U, 1.0, 1.0));
        const double al = alpha_of(beta);
        for (int k = 0; k < 8; ++k) {
            const double x = uniform(-0.9, 0.9), y = uniform(0.01, 0.9), lam = uniform(0.1, 1.0);
            CHECK(s(lam * x, lam * y) ==
                  doctest::Approx(std::pow(lam, al) * s(x, y)).epsilon(1e-9));
        }
    }
}
