/**
 * @file pipeline.hpp
 * @brief End-to-end workflows shared by the command line tool, the acceptance
 *        suite and the python module
 */
#pragma once

#include "clab/elliptic2d.hpp"
#include "clab/errors.hpp"
#include "clab/parabolic.hpp"
#include "clab/polar_matching.hpp"

#include <optional>
#include <vector>

namespace clab {

/// eps values tried by the subsolution search, largest first.
std::vector<double> default_eps_list();

/// Fraction of the largest admissible amplitude used when A is not given.
inline constexpr double kDefaultAmplitudeFraction = 0.99;

/// Largest A for which the angular subsolution fits under the boundary data.
double feasible_amplitude(double beta, double a, double b);

/// Positive subsolution sampled on the grid; A = 0 gives the zero field.
/// Throws InfeasibleError when A exceeds the admissible amplitude.
Field2D subsolution_field(const Grid2D& g, double A, double beta);

/// Floor builder for wings_experiment at a fixed A.
FloorBuilder subsolution_floor(double A);

struct Solve2DOptions {
    double a = 1.0, b = 1.0;
    std::optional<double> A;  ///< unset: kDefaultAmplitudeFraction times the admissible maximum
    double beta = 0.25;
    int Nx = 256, Ny = 128;
    IterateOptions iterate;
};

struct OrderReport {
    bool ok = true;
    double worst = 0.0;  ///< largest violation of sub <= u_min <= u_max <= super
    double tol = 1e-12;
};

struct Solve2DResult {
    Grid2D grid;
    double A = 0.0, A_max = 0.0, beta = 0.0, alpha = 0.0;
    AngularProfile U;
    AssemblyReport assembly;
    std::vector<double> jbar;
    Field2D sub, super;
    BetweenResult between;
    OrderReport order;
    double residual = 0.0;  ///< band 2, on u_min
    double sub_defect = 0.0;
    ExponentFit fit_minus, fit_plus;
    std::vector<std::pair<double, double>> flux;
    RatioReport nondegeneracy;
    JumpReport sub_jump;  ///< grid check at x = 0
};

/// Subsolution search, both monotone iterations and every diagnostic.
Solve2DResult run_solve2d(const Solve2DOptions& opt);

/// dt above the safe bound, carrying the bound.
class DtRejected : public DomainError {
public:
    DtRejected(const std::string& what, double safe) : DomainError(what), safe(safe) {}
    double safe;
};

struct ParabolicOptions {
    double a = 1.0, b = 1.0;
    std::optional<double> A;
    double beta = 0.25;
    int Nx = 64, Ny = 32;
    std::optional<double> dt;  ///< unset: the safe bound
    double T = 0.0;            ///< 0: 10^4 steps
    double nu = 4.0 / 3.0;
    double t_min = 0.1;
    IterateOptions iterate;
};

struct ParabolicResult {
    Grid2D grid;
    double A = 0.0;
    double dt = 0.0, T = 0.0;
    long steps = 0;
    DtBounds bounds;
    Field2D u_min;
    Trajectory to_limit;  ///< from u = y, distance to u_min
    DecayReport decay;    ///< sub below u = y
    bool distance_monotone = true;
};

/// Throws DtRejected when dt exceeds the safe bound.
ParabolicResult run_parabolic(const ParabolicOptions& opt);

}  // namespace clab
