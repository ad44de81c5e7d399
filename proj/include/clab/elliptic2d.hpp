/**
 * @file elliptic2d.hpp
 * @brief Five-point finite differences for -Lap u + j(x)/sqrt(u) = 0 on (-a,b)x(0,1)
 *
 * Monotone iteration between an ordered sub/supersolution pair, plus the
 * pointwise diagnostics used to judge a converged field.
 */
#pragma once

#include "clab/grid.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace clab {

/// j(x) = A (-x)^{-beta} on (-a, 0), zero on (0, b).
struct CurrentDensity {
    double A = 0.0;
    double beta = 0.0;
    double a = 1.0;
    std::optional<std::vector<double>> per_column;

    double operator()(double x) const;
};

/// Cell average of j over [x - hx/2, x + hx/2] for every column.
std::vector<double> cell_averaged_j(const CurrentDensity& d, const Grid2D& g);

/// Factored (shift I - Lap_h) on the interior nodes. shift = 0 gives Poisson.
class StencilSolver {
public:
    explicit StencilSolver(const Grid2D& g, double shift = 0.0);

    /// Solve (shift I - Lap_h) u = rhs at interior nodes with the boundary
    /// values of `boundary`. rhs is node-shaped; boundary entries are ignored.
    Field2D solve(const std::vector<double>& rhs, const Field2D& boundary) const;

    const Grid2D& grid() const { return grid_; }
    double last_relative_residual() const { return last_res_; }

private:
    Grid2D grid_;
    double shift_;
    Eigen::SparseMatrix<double> mat_;
    std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> llt_;
    mutable double last_res_ = 0.0;
    int col(int i, int j) const { return (j - 1) * (grid_.Nx - 1) + (i - 1); }
};

/// -Lap_h u = f with Dirichlet values from `boundary`.
Field2D poisson_solve(const Grid2D& g, const std::vector<double>& f, const Field2D& boundary);

enum class Direction { Descending, Ascending };

struct IterationReport {
    int iterations = 0;
    std::vector<double> deltas;
    bool monotone_ok = true;
    bool converged = false;
    double final_residual = 0.0;
    long floor_activations = 0;
};

struct IterateOptions {
    double tol = 1e-8;
    int max_iter = 2000;
    /// Rounding allowance in the per-node monotonicity test.
    double monotone_slack = 1e-11;
    int residual_band = 2;
};

/// Picard sweep u_n = (-Lap_h)^{-1}(-jbar/sqrt(max(u_{n-1}, floor))).
/// Throws InfeasibleError when a step breaks monotonicity.
std::pair<Field2D, IterationReport> monotone_iterate(const StencilSolver& solver,
                                                     const std::vector<double>& jbar,
                                                     const Field2D& start, Direction dir,
                                                     const Field2D& floor,
                                                     const IterateOptions& opt = {});

struct BetweenResult {
    Field2D u_min;
    Field2D u_max;
    IterationReport from_below;
    IterationReport from_above;
    double gap = 0.0;
};

/// Both monotone limits between sub and super; the source floor is sub.
BetweenResult solve_between(const Grid2D& g, const std::vector<double>& jbar, const Field2D& sub,
                            const Field2D& super, const IterateOptions& opt = {});

/// max |-Lap_h u + jbar/sqrt(u)| over nodes at least `band` cells from y=0 and x=0.
double residual_norm(const Field2D& u, const std::vector<double>& jbar, int band);

/// Largest value of -Lap_h u + jbar/sqrt(u) over all interior nodes (sub test).
double discrete_sub_defect(const Field2D& u, const std::vector<double>& jbar);

struct ExponentFit {
    double exponent = 0.0;
    double x = 0.0;
    int rows_used = 0;
    std::vector<int> excluded_rows;
};

/// Least-squares slope of log u against log y over rows 1..m_rows.
ExponentFit flat_exponent_fit(const Field2D& u, double x, int m_rows);

/// (x, du/dy at y=0) by the one-sided second-order difference.
std::vector<std::pair<double, double>> edge_flux_profile(const Field2D& u);

/// Flux of the column nearest x.
double edge_flux_at(const Field2D& u, double x);

struct WingsRow {
    double beta = 0.0;
    double A = 0.0;
    int Nx = 0;
    int Ny = 0;
    double min_cathode_flux = 0.0;
    double flux_mid = 0.0;
    double fit_minus = 0.0;
    double fit_plus = 0.0;
    int iterations = 0;
};

/// Builds the iteration floor (a positive discrete subsolution) for a given beta.
using FloorBuilder = std::function<Field2D(const Grid2D&, double beta)>;

/// For each beta and each refinement level solve from u = y downward and
/// record cathode fluxes over x in [-3a/4, -a/4] and the exponent fits.
std::vector<WingsRow> wings_experiment(const Grid2D& base, double A,
                                       const std::vector<double>& betas, int levels,
                                       const FloorBuilder& floor, const IterateOptions& opt = {});

std::string wings_csv(const std::vector<WingsRow>& rows);

struct RatioReport {
    double min_ratio = 0.0;
    double x = 0.0;
    double y = 0.0;
};

/// min u / delta^nu over interior nodes.
RatioReport nondegeneracy_check(const Field2D& u, double nu);

struct BarrierReport {
    bool applicable = false;
    bool holds = false;
    double worst_margin = 0.0;
    int nodes_checked = 0;
    std::string note;
};

/// u <= max(1, 2^{1/3}/(-x0)^{1/3}) ((x-x0)^2 + y^2)^{2/3} in the disc of radius -x0.
BarrierReport barrier_bound_check(const Field2D& u, const CurrentDensity& d, double x0);

/// u(x, y) = y as a field.
Field2D linear_field(const Grid2D& g);

}  // namespace clab
