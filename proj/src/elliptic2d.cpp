/**
 * @file elliptic2d.cpp
 * @brief Sparse five-point solves, monotone iteration and field diagnostics
 */

#include "clab/elliptic2d.hpp"

#include "clab/errors.hpp"
#include "clab/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace clab {

double CurrentDensity::operator()(double x) const {
    if (x >= 0.0 || x <= -a) return 0.0;
    return A * std::pow(-x, -beta);
}

std::vector<double> cell_averaged_j(const CurrentDensity& d, const Grid2D& g) {
    if (!(d.beta >= 0.0 && d.beta < 1.0))
        throw DomainError("cell_averaged_j: beta must lie in [0, 1), got " + fmt17(d.beta));
    if (d.A < 0.0) throw DomainError("cell_averaged_j: A must be nonnegative");
    std::vector<double> out(g.Nx + 1, 0.0);
    if (d.per_column) {
        if (d.per_column->size() != out.size())
            throw DomainError("cell_averaged_j: override needs Nx+1 entries");
        return *d.per_column;
    }
    const double h = g.hx();
    const double e = 1.0 - d.beta;
    // antiderivative of A(-x)^{-beta} in the variable t = -x
    auto prim = [&](double t) { return d.A * std::pow(t, e) / e; };
    for (int i = 0; i <= g.Nx; ++i) {
        const double lo = std::max(g.x(i) - 0.5 * h, -g.a);
        const double hi = std::min(g.x(i) + 0.5 * h, 0.0);
        if (hi <= lo) continue;
        out[i] = (prim(-lo) - prim(-hi)) / h;
    }
    return out;
}

StencilSolver::StencilSolver(const Grid2D& g, double shift) : grid_(g), shift_(shift) {
    if (shift < 0.0) throw DomainError("StencilSolver: shift must be nonnegative");
    const int nx = g.Nx - 1, ny = g.Ny - 1;
    const double cx = 1.0 / (g.hx() * g.hx()), cy = 1.0 / (g.hy() * g.hy());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(nx) * ny * 5);
    for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i) {
            const int r = col(i, j);
            t.emplace_back(r, r, shift + 2.0 * cx + 2.0 * cy);
            if (i > 1) t.emplace_back(r, col(i - 1, j), -cx);
            if (i < nx) t.emplace_back(r, col(i + 1, j), -cx);
            if (j > 1) t.emplace_back(r, col(i, j - 1), -cy);
            if (j < ny) t.emplace_back(r, col(i, j + 1), -cy);
        }
    mat_.resize(nx * ny, nx * ny);
    mat_.setFromTriplets(t.begin(), t.end());
    llt_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    llt_->compute(mat_);
    if (llt_->info() != Eigen::Success) throw NumericError("StencilSolver: factorization failed");
}

Field2D StencilSolver::solve(const std::vector<double>& rhs, const Field2D& boundary) const {
    const Grid2D& g = grid_;
    if (rhs.size() != g.nodes() || boundary.u.size() != g.nodes())
        throw DomainError("StencilSolver::solve: size mismatch");
    const int nx = g.Nx - 1, ny = g.Ny - 1;
    const double cx = 1.0 / (g.hx() * g.hx()), cy = 1.0 / (g.hy() * g.hy());
    Eigen::VectorXd b(nx * ny);
    for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i) {
            const double f = rhs[g.idx(i, j)];
            if (!std::isfinite(f))
                throw NumericError("StencilSolver::solve: nonfinite source at node (" +
                                   std::to_string(i) + ", " + std::to_string(j) + ")");
            double v = f;
            if (i == 1) v += cx * boundary(0, j);
            if (i == nx) v += cx * boundary(g.Nx, j);
            if (j == 1) v += cy * boundary(i, 0);
            if (j == ny) v += cy * boundary(i, g.Ny);
            b[col(i, j)] = v;
        }
    Eigen::VectorXd x = llt_->solve(b);
    if (llt_->info() != Eigen::Success) throw NumericError("StencilSolver::solve: solve failed");
    const double bn = b.lpNorm<Eigen::Infinity>();
    const double scale = std::max(bn, mat_.diagonal().maxCoeff() * x.lpNorm<Eigen::Infinity>());
    last_res_ = (mat_ * x - b).lpNorm<Eigen::Infinity>() / std::max(scale, 1e-300);
    if (last_res_ > 1e-10)
        throw NumericError("StencilSolver::solve: relative residual " + fmt17(last_res_));
    Field2D out = boundary;
    for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i) out(i, j) = x[col(i, j)];
    return out;
}

Field2D poisson_solve(const Grid2D& g, const std::vector<double>& f, const Field2D& boundary) {
    return StencilSolver(g).solve(f, boundary);
}

Field2D linear_field(const Grid2D& g) {
    return sample(g, [](double, double y) { return y; });
}

namespace {

double lap(const Field2D& u, int i, int j) {
    const Grid2D& g = u.grid;
    const double hx2 = g.hx() * g.hx(), hy2 = g.hy() * g.hy();
    return (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) / hx2 +
           (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) / hy2;
}

}  // namespace

double residual_norm(const Field2D& u, const std::vector<double>& jbar, int band) {
    const Grid2D& g = u.grid;
    const int i0 = g.i0();
    double worst = 0.0;
    for (int j = std::max(1, band); j < g.Ny; ++j)
        for (int i = 1; i < g.Nx; ++i) {
            if (std::abs(i - i0) < band) continue;
            const double v = u(i, j);
            const double src = jbar[i] > 0.0 ? jbar[i] / std::sqrt(v) : 0.0;
            const double r = std::abs(-lap(u, i, j) + src);
            if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, r);
        }
    return worst;
}

double discrete_sub_defect(const Field2D& u, const std::vector<double>& jbar) {
    const Grid2D& g = u.grid;
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < g.Ny; ++j)
        for (int i = 1; i < g.Nx; ++i) {
            const double src = jbar[i] > 0.0 ? jbar[i] / std::sqrt(u(i, j)) : 0.0;
            worst = std::max(worst, -lap(u, i, j) + src);
        }
    return worst;
}

std::pair<Field2D, IterationReport> monotone_iterate(const StencilSolver& solver,
                                                     const std::vector<double>& jbar,
                                                     const Field2D& start, Direction dir,
                                                     const Field2D& floor,
                                                     const IterateOptions& opt) {
    const Grid2D& g = solver.grid();
    if (jbar.size() != static_cast<std::size_t>(g.Nx + 1))
        throw DomainError("monotone_iterate: jbar needs Nx+1 entries");
    IterationReport rep;
    Field2D u = start;
    impose_dirichlet(u);
    Field2D bnd(g);
    impose_dirichlet(bnd);
    std::vector<double> rhs(g.nodes(), 0.0);
    double prev_res = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= opt.max_iter; ++n) {
        for (int j = 1; j < g.Ny; ++j)
            for (int i = 1; i < g.Nx; ++i) {
                if (jbar[i] == 0.0) {
                    rhs[g.idx(i, j)] = 0.0;
                    continue;
                }
                double v = u(i, j);
                const double fl = floor(i, j);
                if (v < fl) {
                    v = fl;
                    ++rep.floor_activations;
                }
                if (!(v > 0.0))
                    throw InfeasibleError("monotone_iterate: nonpositive floor at node (" +
                                          std::to_string(i) + ", " + std::to_string(j) + ")");
                rhs[g.idx(i, j)] = -jbar[i] / std::sqrt(v);
            }
        Field2D next = solver.solve(rhs, bnd);
        double delta = 0.0;
        for (std::size_t k = 0; k < next.u.size(); ++k) {
            const double d = next.u[k] - u.u[k];
            delta = std::max(delta, std::abs(d));
            const bool bad = dir == Direction::Descending ? d > opt.monotone_slack
                                                          : d < -opt.monotone_slack;
            if (bad) {
                rep.monotone_ok = false;
                const int i = static_cast<int>(k % (g.Nx + 1));
                const int j = static_cast<int>(k / (g.Nx + 1));
                throw InfeasibleError("monotone_iterate: step " + std::to_string(n) +
                                      " not monotone at (" + fmt17(g.x(i)) + ", " + fmt17(g.y(j)) +
                                      "), change " + fmt17(d));
            }
        }
        u = std::move(next);
        rep.deltas.push_back(delta);
        rep.iterations = n;
        if (delta < opt.tol) {
            // keep going only while the residual still improves markedly
            const double res = residual_norm(u, jbar, opt.residual_band);
            rep.final_residual = res;
            if (!(res < 0.5 * prev_res)) {
                rep.converged = true;
                break;
            }
            prev_res = res;
        }
    }
    if (!rep.converged) rep.final_residual = residual_norm(u, jbar, opt.residual_band);
    return {std::move(u), rep};
}

BetweenResult solve_between(const Grid2D& g, const std::vector<double>& jbar, const Field2D& sub,
                            const Field2D& super, const IterateOptions& opt) {
    auto check_order = [&](const Field2D& lo, const Field2D& hi, const char* what) {
        for (int j = 0; j <= g.Ny; ++j)
            for (int i = 0; i <= g.Nx; ++i)
                if (lo(i, j) > hi(i, j) + opt.monotone_slack)
                    throw InfeasibleError(std::string("solve_between: ordering ") + what +
                                          " violated at (" + fmt17(g.x(i)) + ", " +
                                          fmt17(g.y(j)) + ") by " +
                                          fmt17(lo(i, j) - hi(i, j)));
    };
    check_order(sub, super, "sub <= super");
    StencilSolver solver(g);
    BetweenResult r;
    auto lo = monotone_iterate(solver, jbar, sub, Direction::Ascending, sub, opt);
    auto hi = monotone_iterate(solver, jbar, super, Direction::Descending, sub, opt);
    r.u_min = std::move(lo.first);
    r.from_below = lo.second;
    r.u_max = std::move(hi.first);
    r.from_above = hi.second;
    check_order(sub, r.u_min, "sub <= u_min");
    check_order(r.u_min, r.u_max, "u_min <= u_max");
    check_order(r.u_max, super, "u_max <= super");
    for (std::size_t k = 0; k < r.u_min.u.size(); ++k)
        r.gap = std::max(r.gap, std::abs(r.u_max.u[k] - r.u_min.u[k]));
    return r;
}

ExponentFit flat_exponent_fit(const Field2D& u, double x, int m_rows) {
    const Grid2D& g = u.grid;
    if (m_rows < 3 || m_rows >= g.Ny) throw DomainError("flat_exponent_fit: need 3 <= m_rows < Ny");
    const int i = static_cast<int>(std::lround((x + g.a) / g.hx()));
    if (i < 0 || i > g.Nx) throw DomainError("flat_exponent_fit: column outside the grid");
    ExponentFit f;
    f.x = g.x(i);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = 1; j <= m_rows; ++j) {
        const double v = u(i, j);
        if (!(v > 0.0)) {
            f.excluded_rows.push_back(j);
            continue;
        }
        const double lx = std::log(g.y(j)), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++f.rows_used;
    }
    if (f.rows_used < 2) {
        f.exponent = std::numeric_limits<double>::quiet_NaN();
        return f;
    }
    const double n = f.rows_used;
    f.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return f;
}

std::vector<std::pair<double, double>> edge_flux_profile(const Field2D& u) {
    const Grid2D& g = u.grid;
    std::vector<std::pair<double, double>> out;
    out.reserve(g.Nx + 1);
    for (int i = 0; i <= g.Nx; ++i)
        out.emplace_back(g.x(i), (-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) / (2.0 * g.hy()));
    return out;
}

double edge_flux_at(const Field2D& u, double x) {
    const Grid2D& g = u.grid;
    const int i = static_cast<int>(std::lround((x + g.a) / g.hx()));
    return (-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) / (2.0 * g.hy());
}

std::vector<WingsRow> wings_experiment(const Grid2D& base, double A,
                                       const std::vector<double>& betas, int levels,
                                       const FloorBuilder& floor, const IterateOptions& opt) {
    if (std::find(betas.begin(), betas.end(), 0.0) == betas.end())
        throw DomainError("wings_experiment: the beta list must include 0");
    if (levels < 1) throw DomainError("wings_experiment: need at least one level");
    std::vector<WingsRow> rows;
    for (double beta : betas) {
        Grid2D g = base;
        for (int l = 0; l < levels; ++l, g = g.refined()) {
            CurrentDensity d{A, beta, g.a, std::nullopt};
            const auto jbar = cell_averaged_j(d, g);
            StencilSolver solver(g);
            const Field2D fl = floor(g, beta);
            auto [u, rep] =
                monotone_iterate(solver, jbar, linear_field(g), Direction::Descending, fl, opt);
            if (!rep.converged)
                throw NumericError("wings_experiment: no convergence at beta " + fmt17(beta));
            WingsRow r;
            r.beta = beta;
            r.A = A;
            r.Nx = g.Nx;
            r.Ny = g.Ny;
            r.iterations = rep.iterations;
            r.min_cathode_flux = std::numeric_limits<double>::infinity();
            for (auto [x, fx] : edge_flux_profile(u))
                if (x >= -0.75 * g.a - 1e-12 && x <= -0.25 * g.a + 1e-12)
                    r.min_cathode_flux = std::min(r.min_cathode_flux, fx);
            r.flux_mid = edge_flux_at(u, -0.5 * g.a);
            const int m = std::max(3, g.Ny / 16);
            r.fit_minus = flat_exponent_fit(u, -0.5 * g.a, m).exponent;
            r.fit_plus = flat_exponent_fit(u, 0.5 * g.b, m).exponent;
            rows.push_back(r);
        }
    }
    return rows;
}

std::string wings_csv(const std::vector<WingsRow>& rows) {
    std::ostringstream os;
    os << "beta,A,Nx,Ny,min_cathode_flux,flux_mid,fit_minus,fit_plus,iterations\n";
    for (const auto& r : rows)
        os << fmt17(r.beta) << "," << fmt17(r.A) << "," << r.Nx << "," << r.Ny << ","
           << fmt17(r.min_cathode_flux) << "," << fmt17(r.flux_mid) << "," << fmt17(r.fit_minus)
           << "," << fmt17(r.fit_plus) << "," << r.iterations << "\n";
    return os.str();
}

RatioReport nondegeneracy_check(const Field2D& u, double nu) {
    if (!(nu > 0.0 && nu <= 4.0 / 3.0)) throw DomainError("nondegeneracy_check: nu in (0, 4/3]");
    const Grid2D& g = u.grid;
    RatioReport r;
    r.min_ratio = std::numeric_limits<double>::infinity();
    for (int j = 1; j < g.Ny; ++j)
        for (int i = 1; i < g.Nx; ++i) {
            const double d = boundary_distance(g, g.x(i), g.y(j));
            const double q = u(i, j) / std::pow(d, nu);
            if (q < r.min_ratio) {
                r.min_ratio = q;
                r.x = g.x(i);
                r.y = g.y(j);
            }
        }
    return r;
}

BarrierReport barrier_bound_check(const Field2D& u, const CurrentDensity& d, double x0) {
    const Grid2D& g = u.grid;
    if (!(x0 > -g.a && x0 < 0.0)) throw DomainError("barrier_bound_check: x0 must lie in (-a, 0)");
    BarrierReport r;
    // hypothesis checked at the cathode columns of the grid
    for (int i = 1; i < g.i0(); ++i) {
        const double x = g.x(i);
        const double need = 4.0 * std::max(1.0, std::sqrt(2.0) / std::sqrt(-x));
        if (d(x) < need) {
            r.note = "inapplicable: j(" + fmt17(x) + ") = " + fmt17(d(x)) + " < " + fmt17(need);
            return r;
        }
    }
    r.applicable = true;
    r.holds = true;
    r.worst_margin = std::numeric_limits<double>::infinity();
    const double c = std::max(1.0, std::cbrt(2.0) / std::cbrt(-x0));
    for (int j = 0; j <= g.Ny; ++j)
        for (int i = 0; i <= g.Nx; ++i) {
            const double rho2 = (g.x(i) - x0) * (g.x(i) - x0) + g.y(j) * g.y(j);
            if (rho2 >= x0 * x0) continue;
            const double margin = c * std::pow(rho2, 2.0 / 3.0) - u(i, j);
            ++r.nodes_checked;
            r.worst_margin = std::min(r.worst_margin, margin);
            if (margin < -1e-12) r.holds = false;
        }
    return r;
}

}  // namespace clab
