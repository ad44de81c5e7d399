/**
 * @file pipeline.cpp
 * @brief End-to-end workflows
 */

#include "clab/pipeline.hpp"

#include "clab/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace clab {

std::vector<double> default_eps_list() {
    return {0.05, 0.02, 0.01, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
}

double feasible_amplitude(double beta, double a, double b) {
    return max_amplitude(find_subsolution(beta, default_eps_list()), a, b);
}

Field2D subsolution_field(const Grid2D& g, double A, double beta) {
    if (A < 0.0) throw DomainError("subsolution_field: A must be nonnegative");
    if (A == 0.0) return Field2D(g);
    const AngularProfile U = find_subsolution(beta, default_eps_list());
    const double A_max = max_amplitude(U, g.a, g.b);
    if (A > A_max)
        throw InfeasibleError("subsolution_field: A = " + fmt17(A) +
                              " exceeds the admissible amplitude " + fmt17(A_max) +
                              " at beta = " + fmt17(beta));
    const SubsolutionField s = make_subsolution(U, A);
    return sample(g, [&](double x, double y) { return s(x, y); });
}

FloorBuilder subsolution_floor(double A) {
    auto profiles = std::make_shared<std::map<double, AngularProfile>>();
    return [A, profiles](const Grid2D& g, double beta) {
        if (A == 0.0) return Field2D(g);
        auto it = profiles->find(beta);
        if (it == profiles->end())
            it = profiles->emplace(beta, find_subsolution(beta, default_eps_list())).first;
        const double A_max = max_amplitude(it->second, g.a, g.b);
        if (A > A_max)
            throw InfeasibleError("wings floor: A = " + fmt17(A) + " exceeds " + fmt17(A_max) +
                                  " at beta = " + fmt17(beta));
        const SubsolutionField s = make_subsolution(it->second, A);
        return sample(g, [&](double x, double y) { return s(x, y); });
    };
}

namespace {

double resolve_amplitude(const std::optional<double>& A, double A_max) {
    if (!A) return kDefaultAmplitudeFraction * A_max;
    if (*A < 0.0) throw DomainError("A must be nonnegative");
    if (*A > A_max)
        throw InfeasibleError("A = " + fmt17(*A) + " exceeds the admissible amplitude " +
                              fmt17(A_max));
    return *A;
}

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta < 0.5)) throw DomainError("beta must lie in [0, 1/2)");
}

}  // namespace

Solve2DResult run_solve2d(const Solve2DOptions& opt) {
    check_beta(opt.beta);
    Solve2DResult r;
    r.grid = Grid2D(opt.a, opt.b, opt.Nx, opt.Ny);
    const Grid2D& g = r.grid;
    r.beta = opt.beta;
    r.alpha = alpha_of(opt.beta);
    r.U = find_subsolution(opt.beta, default_eps_list(), &r.assembly);
    r.A_max = max_amplitude(r.U, opt.a, opt.b);
    r.A = resolve_amplitude(opt.A, r.A_max);
    r.jbar = cell_averaged_j(CurrentDensity{r.A, opt.beta, opt.a, std::nullopt}, g);
    if (r.A > 0.0) {
        const SubsolutionField s = make_subsolution(r.U, r.A);
        r.sub = sample(g, [&](double x, double y) { return s(x, y); });
    } else {
        r.sub = Field2D(g);
    }
    r.super = linear_field(g);
    r.between = solve_between(g, r.jbar, r.sub, r.super, opt.iterate);
    if (!r.between.from_below.converged || !r.between.from_above.converged)
        throw NumericError("solve2d: monotone iteration did not converge in " +
                           std::to_string(opt.iterate.max_iter) + " sweeps");

    const Field2D& lo = r.between.u_min;
    const Field2D& hi = r.between.u_max;
    for (int j = 0; j <= g.Ny; ++j)
        for (int i = 0; i <= g.Nx; ++i) {
            // the sub is compared where it is a constraint, off the Dirichlet boundary
            const double s = on_boundary(g, i, j) ? -INFINITY : r.sub(i, j);
            const double v = std::max({s - lo(i, j), lo(i, j) - hi(i, j), hi(i, j) - r.super(i, j)});
            r.order.worst = std::max(r.order.worst, v);
        }
    r.order.ok = r.order.worst <= r.order.tol;

    r.residual = residual_norm(lo, r.jbar, 2);
    r.sub_defect = discrete_sub_defect(r.sub, r.jbar);
    const int m = std::max(3, g.Ny / 16);
    r.fit_minus = flat_exponent_fit(lo, -0.5 * g.a, m);
    r.fit_plus = flat_exponent_fit(lo, 0.5 * g.b, m);
    r.flux = edge_flux_profile(lo);
    r.nondegeneracy = nondegeneracy_check(lo, 4.0 / 3.0);
    r.sub_jump = verify_interface_jump(r.sub, Sense::Sub, 1e-8, 1);
    return r;
}

ParabolicResult run_parabolic(const ParabolicOptions& opt) {
    check_beta(opt.beta);
    ParabolicResult r;
    r.grid = Grid2D(opt.a, opt.b, opt.Nx, opt.Ny);
    const Grid2D& g = r.grid;
    r.A = resolve_amplitude(opt.A, feasible_amplitude(opt.beta, opt.a, opt.b));
    const auto jbar = cell_averaged_j(CurrentDensity{r.A, opt.beta, opt.a, std::nullopt}, g);
    const Field2D sub = subsolution_field(g, r.A, opt.beta);
    r.bounds = dt_bounds(g, jbar, sub);
    const double safe = r.bounds.safe();
    r.dt = opt.dt.value_or(safe);
    if (!(r.dt > 0.0)) throw DomainError("dt must be positive");
    if (r.dt > safe)
        throw DtRejected("dt = " + fmt17(r.dt) + " exceeds the safe step " + fmt17(safe), safe);
    if (opt.T < 0.0) throw DomainError("T must be nonnegative");
    r.T = opt.T > 0.0 ? opt.T : 1e4 * r.dt;
    r.steps = std::max(1L, std::lround(r.T / r.dt));

    auto between = solve_between(g, jbar, sub, linear_field(g), opt.iterate);
    if (!between.from_below.converged)
        throw NumericError("parabolic: the elliptic limit did not converge");
    r.u_min = between.u_min;

    r.to_limit = evolve(linear_field(g), r.T, r.dt, jbar, sub, r.u_min);
    for (std::size_t k = 1; k < r.to_limit.distance.size(); ++k)
        if (r.to_limit.distance[k] > r.to_limit.distance[k - 1]) r.distance_monotone = false;
    r.decay = comparison_decay(sub, linear_field(g), opt.nu, r.T, r.dt, jbar, sub, opt.t_min);
    return r;
}

}  // namespace clab
