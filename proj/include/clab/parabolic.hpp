/**
 * @file parabolic.hpp
 * @brief IMEX stepping of u_t - Lap u + j(x)/sqrt(u) chi_{u>0} = 0
 *
 * Diffusion is implicit, the singular absorption explicit with the same
 * floor clamp as the elliptic iteration, followed by a clamp at zero.
 */
#pragma once

#include "clab/elliptic2d.hpp"
#include "clab/grid.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace clab {

struct StepReport {
    long negative_nodes = 0;
    double negative_fraction = 0.0;
};

/// dt <= min(hx^2, hy^2)/4 and dt <= (min floor)^{3/2} / (2 max jbar).
struct DtBounds {
    double diffusion = 0.0;
    double source = 0.0;
    double safe() const { return std::min(diffusion, source); }
};

DtBounds dt_bounds(const Grid2D& g, const std::vector<double>& jbar, const Field2D& floor);

class ImexStepper {
public:
    ImexStepper(const Grid2D& g, double dt, std::vector<double> jbar, Field2D floor);

    Field2D step(const Field2D& u, StepReport* rep = nullptr) const;
    double dt() const { return dt_; }

private:
    double dt_;
    std::vector<double> jbar_;
    Field2D floor_;
    Field2D boundary_;
    StencilSolver solver_;
};

/// One step, factoring the operator on the fly.
Field2D step_imex(const Field2D& u, double dt, const std::vector<double>& jbar, const Field2D& floor,
                  StepReport* rep = nullptr);

struct Trajectory {
    std::vector<double> t;
    std::vector<double> distance;  ///< sup-norm distance to the reference, nan without one
    std::vector<double> weighted;  ///< weighted positive-part norm, nan when not computed
    std::vector<Field2D> snapshots;
    std::vector<double> snapshot_t;
    long negative_nodes = 0;
    Field2D final_field;
};

/// Runs round(T/dt) steps; keeps every `snapshot_every`-th field (0 keeps none).
Trajectory evolve(const Field2D& u0, double T, double dt, const std::vector<double>& jbar,
                  const Field2D& floor, const std::optional<Field2D>& reference = std::nullopt,
                  int snapshot_every = 0);

/// sqrt(sum over interior nodes of hx hy (delta^{-gamma} w_+)^2).
double weighted_positive_norm(const Field2D& w, double gamma);

struct DecayReport {
    double gamma = 0.0;
    double rate = 0.0;  ///< (2 gamma + 1)/4
    double t_min = 0.0;
    double initial_norm = 0.0;  ///< L2 norm of (v0 - u0)_+
    double C = 0.0;
    bool bounded = false;
    long order_violations = 0;
    double max_reverse = 0.0;  ///< sup of (u - v)_+ over all stamps
    Trajectory lower;          ///< weighted carries |delta^{-gamma}(v - u)_+|
    Trajectory upper;
};

/// Evolves u0 <= v0 together, checks the order at every step and fits C in
/// |delta^{-gamma}(v - u)_+| <= C t^{-(2 gamma+1)/4} |(v0 - u0)_+| for t >= t_min.
/// Throws NumericError when the order breaks.
DecayReport comparison_decay(const Field2D& u0, const Field2D& v0, double nu, double T, double dt,
                             const std::vector<double>& jbar, const Field2D& floor,
                             double t_min = 0.1);

/// CSV columns t,distance_to_reference,weighted_positive_part_norm.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace clab
