/**
 * @file polar_matching.hpp
 * @brief Angular sub/supersolutions u = k r^alpha U(theta) around the cathode edge
 *
 * Substituting u = k r^alpha U(theta) into -Lap u + A(-x)^{-beta}/sqrt(u) = 0
 * gives, when 3 alpha/2 + beta = 2,
 *   -U'' + V(theta)/sqrt(U) = alpha^2 U,   V(theta) = A k^{-3/2} (-cos theta)^{-beta},
 * on theta in (pi/2, pi). The subsolution glues three pieces
 *   v1 on (pi/2, pi/2 + eps], a concave quadratic w, and v2 on [pi/2 + 2 eps, pi),
 * where v2 is the degenerate solution shot backwards from theta = pi.
 */
#pragma once

#include "clab/errors.hpp"
#include "clab/grid.hpp"

#include <functional>
#include <string>
#include <vector>

namespace clab {

/// alpha = (2/3)(2 - beta).
double alpha_of(double beta);

/// Samples of v2 in s = pi - theta, with Hermite interpolation in between.
struct ShotPiece {
    double V = 0.0;
    double lambda = 0.0;
    double s0 = 0.0;         ///< seed offset actually used
    double seed_coef = 0.0;  ///< (9V/4)^{2/3}
    double seed_residual = 0.0;
    double ode_residual = 0.0;  ///< max FD residual over s >= 0.1
    std::vector<double> s, v, dv;  ///< dv = dv/ds

    double s_max() const { return s.back(); }
    double value_s(double s) const;
    double deriv_s(double s) const;
    /// theta-parametrised value and derivative.
    double value(double theta) const;
    double derivative(double theta) const;
};

/// Integrate -v'' + V/sqrt(v) = lambda v backwards from theta = pi down to theta_lo.
/// Throws NumericError if v reaches zero before theta_lo.
ShotPiece shoot_v2(double V, double lambda, double theta_lo, double s0 = 1e-4);

/// v1(theta) = h + c s^alpha - m s, s = theta - pi/2.
struct V1Piece {
    double h = 0.0;
    double c = 0.0;
    double m = 0.0;
    double p = 0.0;     ///< exponent, equals alpha
    double coef = 0.0;  ///< C with V(theta) <= C s^{-beta}

    double value(double theta) const;
    double derivative(double theta) const;
    double second_derivative(double theta) const;
};

/// c = c_mult (C / lambda_q*)^{2/3} with q = -beta and C = A pi^beta / 2^beta.
V1Piece build_v1(double A, double beta, double h, double m = 0.0, double c_mult = 1.0);

struct PointwiseReport {
    double worst = 0.0;  ///< max of the tested expression (<= 0 means pass)
    double theta = 0.0;
    bool ok = true;
};

/// max of -v1'' + A(-cos theta)^{-beta}/sqrt(v1) over n points of (pi/2, theta_hi].
PointwiseReport check_v1(const V1Piece& v1, double A, double beta, double theta_hi, int n);

struct BlendCoefficients {
    double k0 = 0.0, k1 = 0.0, k2 = 0.0;
    double k2_min = 0.0;
    double B = 0.0, C = 0.0;
    double eps = 0.0;
    double R0 = 0.0;  ///< centre, set by the caller

    double value(double theta) const;
    double derivative(double theta) const;
};

class BlendInfeasible : public InfeasibleError {
public:
    BlendInfeasible(const std::string& what, double C, double k2_min)
        : InfeasibleError(what), C(C), k2_min(k2_min) {}
    double C;
    double k2_min;
};

/// Quadratic cap w = k0 + k1 t - k2 t^2 on |t| <= eps/2 joining v1 to v2.
BlendCoefficients blend_w(double v1L, double v2R, double d1L, double d2R, double eps,
                          double V_eps, double lam);

struct AngularProfile {
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;
    double eps = 0.0;
    double A_eff = 1.0;  ///< V(theta) = A_eff (-cos theta)^{-beta} after normalization
    double norm = 1.0;   ///< raw max, U = raw / norm
    bool single_piece = false;
    V1Piece v1;
    BlendCoefficients w;
    ShotPiece v2;

    double theta1() const;  ///< v1 | w junction
    double theta2() const;  ///< w | v2 junction
    int piece_id(double theta) const;
    double value(double theta) const;
    double derivative(double theta) const;       ///< right derivative at junctions
    double derivative_left(double theta) const;  ///< left derivative at junctions
    double V(double theta) const;
};

struct JunctionJump {
    double theta = 0.0;
    double jump = 0.0;  ///< U'(theta+) - U'(theta-), must be >= 0
    double value_gap = 0.0;
};

struct AssemblyReport {
    double robin_lhs = 0.0;  ///< -U'(pi/2)/U(pi/2)
    double robin_rhs = 0.0;  ///< alpha (-cot(alpha pi/2))
    std::vector<JunctionJump> jumps;
    PointwiseReport angular;  ///< max of -U'' + V/sqrt U - lambda U off junctions
};

/// Three-piece subsolution for one eps; beta = 0 gives the single v2 piece.
/// Throws InfeasibleError naming the failing condition.
AngularProfile assemble_subsolution(double beta, double eps, AssemblyReport* report = nullptr);

/// Tries eps from the list in order and returns the first feasible profile.
AngularProfile find_subsolution(double beta, const std::vector<double>& eps_list,
                                AssemblyReport* report = nullptr);

/// alpha (-cot(alpha pi/2)) - (-U'(pi/2)/U(pi/2)).
double robin_margin(double alpha, double U, double U_prime);

/// Worst value of -U'' + V/sqrt(U) - lambda U over n samples away from junction bands.
PointwiseReport check_angular(const AngularProfile& U, int n, double band);

/// CSV columns theta,U,U_prime,piece_id.
std::string angular_csv(const AngularProfile& U, int n);

/// Subsolution field: k r^alpha U(theta) for x < 0, K r^alpha sin(alpha theta) for x >= 0.
struct SubsolutionField {
    AngularProfile U;
    double A = 0.0;
    double k = 0.0;
    double K = 0.0;

    double operator()(double x, double y) const;
    double minus_side(double x, double y) const;
    double plus_side(double x, double y) const;
};

/// Largest A for which the field stays below the Dirichlet data on the outer boundary.
double max_amplitude(const AngularProfile& U, double a, double b);

SubsolutionField make_subsolution(const AngularProfile& U, double A);

enum class Sense { Sub, Super };

struct JumpSample {
    double x = 0.0, y = 0.0;
    double behind = 0.0;  ///< normal derivative on the side the normal leaves
    double ahead = 0.0;
    double margin = 0.0;  ///< >= -tol passes
};

struct JumpReport {
    bool ok = true;
    double worst_margin = 0.0;
    int samples = 0;
    std::vector<JumpSample> offending;
};

/// Vertical interface x = 0 of a grid field; normal along +x.
JumpReport verify_interface_jump(const Field2D& f, Sense sense, double tol, int skip_rows = 1);

/// Curve given by points and unit normals; behind is evaluated on the side -n.
JumpReport verify_interface_jump(const std::function<double(double, double)>& behind,
                                 const std::function<double(double, double)>& ahead,
                                 const std::vector<std::pair<double, double>>& points,
                                 const std::vector<std::pair<double, double>>& normals, Sense sense,
                                 double tol, double step);

struct SuperReport {
    double A = 0.0, beta = 0.0, alpha = 0.0;
    double a = 0.0, b = 0.0;
    double theta_b = 0.0;
    double K = 0.0;
    double C3 = 0.0, C3_hat = 0.0;
    ShotPiece Ubar;  ///< shot with V = 1
    double robin_lhs = 0.0, robin_rhs = 0.0;
    bool robin_ok = false;
    double left_worst = 0.0, top_worst = 0.0, right_worst = 0.0;  ///< min of u - data
    double worst_x = 0.0, worst_y = 0.0;
    bool boundary_ok = false;
    double suggested_bump = 1.0;  ///< factor on the amplitude that would fix the boundary
    double continuity_defect = 0.0;  ///< max |region 2 - region 3| along the ray
    double min_neg_laplacian_region2 = 0.0;
    JumpReport ray_jump;     ///< Super sense at theta_b
    JumpReport origin_jump;  ///< Super sense at x = 0

    double operator()(double x, double y) const;
};

/// Three-region partially flat supersolution and its checks.
SuperReport build_supersolution(double A, double beta, double a, double b, const Grid2D& g);

}  // namespace clab
