#include "doctest.h"

#include "clab/elliptic2d.hpp"
#include "clab/errors.hpp"
#include "clab/parabolic.hpp"

#include <algorithm>
#include <cmath>

using namespace clab;

namespace {

double sup_diff(const Field2D& a, const Field2D& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.u.size(); ++k) d = std::max(d, std::abs(a.u[k] - b.u[k]));
    return d;
}

bool keeps_dirichlet(const Field2D& a) {
    Field2D d(a.grid);
    impose_dirichlet(d);
    const Grid2D& g = a.grid;
    for (int j = 0; j <= g.Ny; ++j)
        for (int i = 0; i <= g.Nx; ++i)
            if (on_boundary(g, i, j) && a(i, j) != d(i, j)) return false;
    return true;
}

}  // namespace

TEST_CASE("harmonic state is stationary without current") {
    Grid2D g(1.0, 1.0, 32, 16);
    std::vector<double> jbar(g.Nx + 1, 0.0);
    Field2D bnd(g);
    impose_dirichlet(bnd);
    auto harm = poisson_solve(g, std::vector<double>(g.nodes(), 0.0), bnd);
    Field2D floor(g, 1e-3);
    auto tr = evolve(harm, 0.05, 1e-3, jbar, floor, harm);
    CHECK(tr.t.size() == 51);
    CHECK(tr.distance.back() < 1e-12);
    CHECK(tr.negative_nodes == 0);
}

TEST_CASE("one step from u = y lowers the cathode side") {
    Grid2D g(1.0, 1.0, 32, 16);
    auto jbar = cell_averaged_j(CurrentDensity{0.1, 0.0, 1.0, std::nullopt}, g);
    Field2D floor = sample(g, [](double, double y) { return 0.01 * y * y; });
    auto u0 = linear_field(g);
    StepReport rep;
    auto u1 = step_imex(u0, 1e-3, jbar, floor, &rep);
    CHECK(rep.negative_nodes == 0);
    CHECK(keeps_dirichlet(u1));
    for (int j = 1; j < g.Ny; ++j) {
        for (int i = 1; i < g.i0(); ++i) CHECK(u1(i, j) < u0(i, j));
        // linear data is harmonic, the anode side moves only through diffusion from the left
        for (int i = g.i0() + 1; i < g.Nx; ++i) CHECK(u1(i, j) <= u0(i, j) + 1e-15);
    }
}

TEST_CASE("dt bounds") {
    Grid2D g(1.0, 1.0, 32, 16);
    auto jbar = cell_averaged_j(CurrentDensity{0.5, 0.0, 1.0, std::nullopt}, g);
    Field2D floor(g, 0.04);
    auto d = dt_bounds(g, jbar, floor);
    CHECK(d.diffusion == doctest::Approx(std::pow(1.0 / 16.0, 2) / 4.0));
    CHECK(d.source == doctest::Approx(std::pow(0.04, 1.5) / 1.0));
    CHECK(d.safe() == std::min(d.diffusion, d.source));
    std::vector<double> none(g.Nx + 1, 0.0);
    CHECK(std::isinf(dt_bounds(g, none, floor).source));
    CHECK_THROWS_AS(ImexStepper(g, 0.0, jbar, floor), DomainError);
}

TEST_CASE("trajectory approaches the elliptic limit") {
    Grid2D g(1.0, 1.0, 32, 16);
    auto jbar = cell_averaged_j(CurrentDensity{0.05, 0.0, 1.0, std::nullopt}, g);
    Field2D floor = sample(g, [](double, double y) { return 0.01 * y * y; });
    StencilSolver s(g);
    auto [lim, rep] = monotone_iterate(s, jbar, linear_field(g), Direction::Descending, floor);
    REQUIRE(rep.converged);
    const double dt = std::min(1e-3, dt_bounds(g, jbar, floor).safe());
    auto tr = evolve(linear_field(g), 1.0, dt, jbar, floor, lim, 100);
    for (std::size_t k = 1; k < tr.distance.size(); ++k)
        CHECK(tr.distance[k] <= tr.distance[k - 1] + 1e-13);
    CHECK(tr.distance.back() < 0.1 * tr.distance.front());
    CHECK(tr.snapshots.size() == tr.snapshot_t.size());
    CHECK(tr.snapshot_t.front() == 0.0);
    CHECK(keeps_dirichlet(tr.final_field));
    CHECK(sup_diff(tr.final_field, lim) == doctest::Approx(tr.distance.back()));
}

TEST_CASE("weighted norm") {
    Grid2D g(1.0, 1.0, 16, 16);
    Field2D w(g, -1.0);
    CHECK(weighted_positive_norm(w, 0.5) == 0.0);
    Field2D one(g, 1.0);
    // gamma = 0: sqrt(hx hy * interior count)
    const double n = (g.Nx - 1) * (g.Ny - 1);
    CHECK(weighted_positive_norm(one, 0.0) == doctest::Approx(std::sqrt(g.hx() * g.hy() * n)));
    CHECK(weighted_positive_norm(one, 1.0) > weighted_positive_norm(one, 0.0));
}

TEST_CASE("comparison decay") {
    Grid2D g(1.0, 1.0, 32, 16);
    auto jbar = cell_averaged_j(CurrentDensity{0.05, 0.0, 1.0, std::nullopt}, g);
    Field2D floor = sample(g, [](double, double y) { return 0.01 * y * y; });
    auto v0 = linear_field(g);
    const double dt = 1e-3;

    auto same = comparison_decay(v0, v0, 1.0, 0.2, dt, jbar, floor);
    CHECK(same.initial_norm == 0.0);
    CHECK(same.C == 0.0);
    for (double w : same.lower.weighted) CHECK(w == 0.0);

    auto u0 = sample(g, [](double, double y) { return y * y; });
    auto r = comparison_decay(u0, v0, 1.0, 1.0, dt, jbar, floor);
    CHECK(r.gamma == 1.0);
    CHECK(r.rate == 0.75);
    CHECK(r.order_violations == 0);
    CHECK(r.max_reverse == 0.0);
    CHECK(r.bounded);
    CHECK(r.C > 0.0);
    CHECK(r.lower.weighted.back() < r.lower.weighted.front());
    CHECK(comparison_decay(u0, v0, 0.5, 0.1, dt, jbar, floor).gamma == 0.75);
    CHECK_THROWS_AS(comparison_decay(v0, u0, 1.0, 0.1, dt, jbar, floor), DomainError);
    CHECK_THROWS_AS(comparison_decay(u0, v0, 2.0, 0.1, dt, jbar, floor), DomainError);
}

TEST_CASE("trajectory csv") {
    Trajectory tr;
    tr.t = {0.0, 0.5};
    tr.distance = {1.0, 0.25};
    tr.weighted = {2.0, 1.0};
    auto s = trajectory_csv(tr);
    CHECK(s.rfind("t,distance_to_reference,weighted_positive_part_norm\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}
