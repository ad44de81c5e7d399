/**
 * @file polar_matching.cpp
 * @brief Shooting, blending and verification of the angular barriers
 */

#include "clab/polar_matching.hpp"

#include "clab/closed_forms.hpp"
#include "clab/io.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace clab {

namespace {

using std::numbers::pi;
constexpr double kHalfPi = pi / 2.0;

// index k with s[k] <= x < s[k+1]
std::size_t bracket(const std::vector<double>& s, double x) {
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t k = static_cast<std::size_t>(it - s.begin());
    return std::clamp<std::size_t>(k == 0 ? 0 : k - 1, 0, s.size() - 2);
}

}  // namespace

double alpha_of(double beta) { return 2.0 * (2.0 - beta) / 3.0; }

double ShotPiece::value_s(double x) const {
    if (x <= 0.0) return 0.0;
    if (x < s.front()) return seed_coef * std::pow(x, 4.0 / 3.0);
    if (x > s.back()) throw DomainError("ShotPiece: s beyond the integrated range");
    const std::size_t k = bracket(s, x);
    const double h = s[k + 1] - s[k];
    const double t = (x - s[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v[k] + (t3 - 2 * t2 + t) * h * dv[k] +
           (-2 * t3 + 3 * t2) * v[k + 1] + (t3 - t2) * h * dv[k + 1];
}

double ShotPiece::deriv_s(double x) const {
    if (x <= 0.0) return 0.0;
    if (x < s.front()) return 4.0 / 3.0 * seed_coef * std::cbrt(x);
    if (x > s.back()) throw DomainError("ShotPiece: s beyond the integrated range");
    const std::size_t k = bracket(s, x);
    const double h = s[k + 1] - s[k];
    const double t = (x - s[k]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * v[k] + (3 * t2 - 4 * t + 1) * h * dv[k] +
            (-6 * t2 + 6 * t) * v[k + 1] + (3 * t2 - 2 * t) * h * dv[k + 1]) /
           h;
}

double ShotPiece::value(double theta) const { return value_s(pi - theta); }
double ShotPiece::derivative(double theta) const { return -deriv_s(pi - theta); }

ShotPiece shoot_v2(double V, double lambda, double theta_lo, double s0) {
    if (!(V > 0.0 && lambda > 0.0)) throw DomainError("shoot_v2: V and lambda must be positive");
    if (!(theta_lo >= 0.0 && theta_lo < pi)) throw DomainError("shoot_v2: theta_lo in [0, pi)");
    ShotPiece p;
    p.V = V;
    p.lambda = lambda;
    p.seed_coef = std::pow(9.0 * V / 4.0, 2.0 / 3.0);
    // the series cancels the two leading terms; lambda c s0^{4/3} is what is left
    while (lambda * p.seed_coef * std::pow(s0, 4.0 / 3.0) >= 1e-6) s0 *= 0.5;
    p.s0 = s0;
    p.seed_residual = lambda * p.seed_coef * std::pow(s0, 4.0 / 3.0);
    const double s_end = pi - theta_lo;
    if (s_end <= s0) throw DomainError("shoot_v2: interval shorter than the seed offset");

    std::vector<double> times;
    const double knee = std::min(0.01, 0.5 * s_end);
    const int n_geo = 200;
    for (int k = 0; k < n_geo; ++k) times.push_back(s0 * std::pow(knee / s0, double(k) / n_geo));
    const int n_uni = std::max(2, static_cast<int>(std::ceil((s_end - knee) / 1e-3)));
    for (int k = 0; k <= n_uni; ++k) times.push_back(knee + (s_end - knee) * k / n_uni);
    times.back() = s_end;

    using State = std::array<double, 2>;
    bool hit_zero = false;
    auto rhs = [&](const State& x, State& dxdt, double) {
        double v = x[0];
        if (!(v > 0.0)) {
            hit_zero = true;
            v = 1e-300;
        }
        dxdt[0] = x[1];
        dxdt[1] = V / std::sqrt(v) - lambda * v;
    };
    State x{p.seed_coef * std::pow(s0, 4.0 / 3.0), 4.0 / 3.0 * p.seed_coef * std::cbrt(s0)};
    namespace ode = boost::numeric::odeint;
    // controlled steps land on every sample; dense output would add interpolation noise
    auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
    ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-6,
                         [&](const State& st, double t) {
                             p.s.push_back(t);
                             p.v.push_back(st[0]);
                             p.dv.push_back(st[1]);
                         });
    for (std::size_t k = 0; k < p.v.size(); ++k)
        if (hit_zero || !(p.v[k] > 0.0))
            throw NumericError("shoot_v2: v2 reaches zero at theta = " + fmt17(pi - p.s[k]));

    // independent FD check on the uniform part
    const double h = (s_end - knee) / n_uni;
    for (std::size_t k = n_geo + 2; k + 2 < p.s.size(); ++k) {
        if (p.s[k] < 0.1) continue;
        const double d2 = (-p.v[k + 2] + 16 * p.v[k + 1] - 30 * p.v[k] + 16 * p.v[k - 1] - p.v[k - 2]) /
                          (12 * h * h);
        const double r = std::abs(-d2 + V / std::sqrt(p.v[k]) - lambda * p.v[k]);
        p.ode_residual = std::max(p.ode_residual, r);
    }
    return p;
}

double V1Piece::value(double theta) const {
    const double s = theta - kHalfPi;
    return h + c * std::pow(s, p) - m * s;
}

double V1Piece::derivative(double theta) const {
    const double s = theta - kHalfPi;
    return c * p * std::pow(s, p - 1.0) - m;
}

double V1Piece::second_derivative(double theta) const {
    const double s = theta - kHalfPi;
    return c * p * (p - 1.0) * std::pow(s, p - 2.0);
}

V1Piece build_v1(double A, double beta, double h, double m, double c_mult) {
    if (!(A >= 0.0)) throw DomainError("build_v1: A must be nonnegative");
    if (!(beta >= 0.0 && beta < 0.5)) throw DomainError("build_v1: beta in [0, 1/2)");
    if (!(h > 0.0)) throw DomainError("build_v1: h must be positive");
    if (c_mult < 1.0) throw DomainError("build_v1: c_mult below 1 breaks the subsolution bound");
    V1Piece v;
    v.h = h;
    v.m = m;
    v.p = alpha_of(beta);
    // sin s >= (2/pi) s on [0, pi/2]
    v.coef = A * std::pow(pi / 2.0, beta);
    v.c = v.coef > 0.0 ? c_mult * power_coefficient(-beta, v.coef) : 0.0;
    return v;
}

PointwiseReport check_v1(const V1Piece& v1, double A, double beta, double theta_hi, int n) {
    PointwiseReport r;
    r.worst = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n; ++i) {
        const double th = kHalfPi + (theta_hi - kHalfPi) * i / n;
        const double V = A * std::pow(-std::cos(th), -beta);
        const double e = -v1.second_derivative(th) + V / std::sqrt(v1.value(th));
        if (e > r.worst) {
            r.worst = e;
            r.theta = th;
        }
    }
    r.ok = r.worst <= 0.0;
    return r;
}

double BlendCoefficients::value(double theta) const {
    const double t = theta - R0;
    return k0 + k1 * t - k2 * t * t;
}

double BlendCoefficients::derivative(double theta) const { return k1 - 2.0 * k2 * (theta - R0); }

BlendCoefficients blend_w(double v1L, double v2R, double d1L, double d2R, double eps,
                          double V_eps, double lam) {
    if (!(eps > 0.0 && V_eps > 0.0 && lam > 0.0))
        throw DomainError("blend_w: eps, V_eps and lambda must be positive");
    BlendCoefficients w;
    w.eps = eps;
    w.k1 = (v2R - v1L) / eps;
    w.k2_min = std::max({0.0, (d1L - w.k1) / eps, (w.k1 - d2R) / eps});
    w.B = 0.5 * (v1L + v2R) - std::abs(w.k1) * eps / 2.0;
    if (!(w.B > 0.0))
        throw BlendInfeasible("blend_w: lower bound B = " + fmt17(w.B) + " is not positive",
                              std::numeric_limits<double>::quiet_NaN(), w.k2_min);
    w.C = V_eps / std::sqrt(w.B) - lam * w.B;
    if (!(w.C < 0.0 && w.k2_min <= -w.C / 2.0))
        throw BlendInfeasible("blend_w: empty interval [k2_min, -C/2] with C = " + fmt17(w.C) +
                                  ", k2_min = " + fmt17(w.k2_min),
                              w.C, w.k2_min);
    const double eta = eps * eps * eps / 10.0;
    w.k2 = w.k2_min + std::min(eta, -w.C / 4.0);
    w.k0 = 0.5 * (v1L + v2R) + w.k2 * eps * eps / 4.0;

    // derivative signs and concavity, re-verified after rounding
    const double wl = w.k1 + w.k2 * eps, wr = w.k1 - w.k2 * eps;
    const double slack = 1e-12 * (1.0 + std::abs(w.k1));
    if (wl < d1L - slack || wr > d2R + slack || 2.0 * w.k2 + w.C > 0.0)
        throw BlendInfeasible("blend_w: postcondition failed after rounding", w.C, w.k2_min);
    return w;
}

double AngularProfile::theta1() const { return kHalfPi + eps; }
double AngularProfile::theta2() const { return kHalfPi + 2.0 * eps; }

int AngularProfile::piece_id(double theta) const {
    if (single_piece) return 2;
    if (theta <= theta1()) return 0;
    if (theta < theta2()) return 1;
    return 2;
}

double AngularProfile::value(double theta) const {
    switch (piece_id(theta)) {
        case 0: return v1.value(theta) / norm;
        case 1: return w.value(theta) / norm;
        default: return v2.value(theta) / norm;
    }
}

double AngularProfile::derivative(double theta) const {
    if (single_piece || theta >= theta2()) return v2.derivative(theta) / norm;
    if (theta >= theta1()) return w.derivative(theta) / norm;
    return v1.derivative(theta) / norm;
}

double AngularProfile::derivative_left(double theta) const {
    if (single_piece || theta > theta2()) return v2.derivative(theta) / norm;
    if (theta > theta1()) return w.derivative(theta) / norm;
    return v1.derivative(theta) / norm;
}

double AngularProfile::V(double theta) const {
    if (beta == 0.0) return A_eff;
    return A_eff * std::pow(-std::cos(theta), -beta);
}

double robin_margin(double alpha, double U, double U_prime) {
    return alpha * (-1.0 / std::tan(alpha * kHalfPi)) - (-U_prime / U);
}

AngularProfile assemble_subsolution(double beta, double eps, AssemblyReport* report) {
    if (!(beta >= 0.0 && beta < 0.5)) throw DomainError("assemble_subsolution: beta in [0, 1/2)");
    AngularProfile P;
    P.beta = beta;
    P.alpha = alpha_of(beta);
    P.lambda = P.alpha * P.alpha;
    P.eps = eps;
    AssemblyReport rep;
    rep.robin_rhs = P.alpha * (-1.0 / std::tan(P.alpha * kHalfPi));

    double raw_max = 0.0;
    if (beta == 0.0) {
        // constant V: one degenerate piece from pi back to pi/2
        P.single_piece = true;
        P.v2 = shoot_v2(1.0, P.lambda, kHalfPi);
        raw_max = *std::max_element(P.v2.v.begin(), P.v2.v.end());
    } else {
        if (!(eps > 0.0 && 2.0 * eps < kHalfPi - 0.1))
            throw DomainError("assemble_subsolution: eps out of range");
        const double th1 = P.theta1(), th2 = P.theta2();
        // V decreases in theta, so its value at th1 bounds it on (th1, pi)
        const double V_eps = std::pow(std::sin(eps), -beta);
        P.v2 = shoot_v2(V_eps, P.lambda, th2);
        const double v2R = P.v2.value(th2);
        const double d2R = P.v2.derivative(th2);

        // tilt and offset so that v1 meets v2's linear continuation at th1
        V1Piece base = build_v1(1.0, beta, 1.0);
        const double c = base.c, a = P.alpha;
        const double m = c * a * std::pow(eps, a - 1.0) - d2R;
        const double h = v2R - 2.0 * d2R * eps + c * (a - 1.0) * std::pow(eps, a);
        if (!(m * eps <= h))
            throw InfeasibleError("assemble_subsolution: tilt m = " + fmt17(m) +
                                  " exceeds h/eps with h = " + fmt17(h));
        P.v1 = build_v1(1.0, beta, h, m);
        const PointwiseReport c1 = check_v1(P.v1, 1.0, beta, th1, 1000);
        if (!c1.ok)
            throw InfeasibleError("assemble_subsolution: v1 inequality fails at theta = " +
                                  fmt17(c1.theta) + " by " + fmt17(c1.worst));

        P.w = blend_w(P.v1.value(th1), v2R, P.v1.derivative(th1), d2R, eps, V_eps, P.lambda);
        P.w.R0 = kHalfPi + 1.5 * eps;

        for (int i = 0; i <= 400; ++i) {
            const double th = kHalfPi + 2.0 * eps * i / 400.0;
            raw_max = std::max(raw_max, i <= 200 ? P.v1.value(th) : P.w.value(th));
        }
        for (std::size_t k = 0; k < P.v2.s.size(); ++k) raw_max = std::max(raw_max, P.v2.v[k]);
    }
    P.norm = raw_max;
    P.A_eff = std::pow(raw_max, -1.5);

    rep.robin_lhs = -P.derivative(kHalfPi) / P.value(kHalfPi);
    if (!(rep.robin_lhs <= rep.robin_rhs))
        throw InfeasibleError("assemble_subsolution: Robin inequality fails at x = 0, -U'/U = " +
                              fmt17(rep.robin_lhs) + " > alpha(-cot(alpha pi/2)) = " +
                              fmt17(rep.robin_rhs));
    if (!P.single_piece) {
        for (double th : {P.theta1(), P.theta2()}) {
            JunctionJump j;
            j.theta = th;
            j.jump = P.derivative(th) - P.derivative_left(th);
            const double left = th == P.theta1() ? P.v1.value(th) : P.w.value(th);
            const double right = th == P.theta1() ? P.w.value(th) : P.v2.value(th);
            j.value_gap = std::abs(left - right) / P.norm;
            rep.jumps.push_back(j);
            if (j.jump < -1e-12)
                throw InfeasibleError("assemble_subsolution: derivative jump " + fmt17(j.jump) +
                                      " has the wrong sign at theta = " + fmt17(th));
        }
    }
    rep.angular = check_angular(P, 2000, std::max(2e-3, 0.05 * eps));
    if (report) *report = rep;
    return P;
}

AngularProfile find_subsolution(double beta, const std::vector<double>& eps_list,
                                AssemblyReport* report) {
    if (eps_list.empty()) throw DomainError("find_subsolution: empty eps list");
    std::string why;
    for (double eps : eps_list) {
        try {
            return assemble_subsolution(beta, eps, report);
        } catch (const InfeasibleError& e) {
            why += "eps=" + fmt17(eps) + ": " + e.what() + "; ";
        } catch (const NumericError& e) {
            why += "eps=" + fmt17(eps) + ": " + e.what() + "; ";
        }
    }
    throw InfeasibleError("find_subsolution: no feasible eps for beta = " + fmt17(beta) + " (" +
                          why + ")");
}

PointwiseReport check_angular(const AngularProfile& U, int n, double band) {
    PointwiseReport r;
    r.worst = -std::numeric_limits<double>::infinity();
    const double d = 1e-3;
    for (int i = 1; i < n; ++i) {
        const double th = kHalfPi + kHalfPi * i / n;
        if (pi - th < 0.05 || th - kHalfPi < band) continue;
        if (!U.single_piece && (std::abs(th - U.theta1()) < band || std::abs(th - U.theta2()) < band))
            continue;
        double upp;
        const int id = U.piece_id(th);
        if (id == 0)
            upp = U.v1.second_derivative(th) / U.norm;
        else if (id == 1)
            upp = -2.0 * U.w.k2 / U.norm;
        else {
            if (th - 2 * d < U.theta2() && !U.single_piece) continue;
            if (th - 2 * d < kHalfPi) continue;
            upp = (-U.value(th + 2 * d) + 16 * U.value(th + d) - 30 * U.value(th) +
                   16 * U.value(th - d) - U.value(th - 2 * d)) /
                  (12 * d * d);
        }
        const double u = U.value(th);
        const double e = -upp + U.V(th) / std::sqrt(u) - U.lambda * u;
        if (e > r.worst) {
            r.worst = e;
            r.theta = th;
        }
    }
    r.ok = r.worst <= 1e-6;
    return r;
}

std::string angular_csv(const AngularProfile& U, int n) {
    std::ostringstream os;
    os << "# alpha=" << fmt17(U.alpha) << " beta=" << fmt17(U.beta) << " eps=" << fmt17(U.eps)
       << " A_eff=" << fmt17(U.A_eff) << "\n";
    os << "theta,U,U_prime,piece_id\n";
    for (int i = 0; i <= n; ++i) {
        const double th = kHalfPi + kHalfPi * i / n;
        os << fmt17(th) << "," << fmt17(U.value(th)) << "," << fmt17(U.derivative(th)) << ","
           << U.piece_id(th) << "\n";
    }
    return os.str();
}

double SubsolutionField::minus_side(double x, double y) const {
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    const double th = std::clamp(std::atan2(y, x), kHalfPi, pi);
    return k * std::pow(r, U.alpha) * U.value(th);
}

double SubsolutionField::plus_side(double x, double y) const {
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    const double th = std::clamp(std::atan2(y, x), 0.0, kHalfPi);
    return K * std::pow(r, U.alpha) * std::sin(U.alpha * th);
}

double SubsolutionField::operator()(double x, double y) const {
    return x < 0.0 ? minus_side(x, y) : plus_side(x, y);
}

SubsolutionField make_subsolution(const AngularProfile& U, double A) {
    if (!(A > 0.0)) throw DomainError("make_subsolution: A must be positive");
    SubsolutionField f;
    f.U = U;
    f.A = A;
    f.k = std::pow(A / U.A_eff, 2.0 / 3.0);
    f.K = f.k * U.value(kHalfPi) / std::sin(U.alpha * kHalfPi);
    return f;
}

double max_amplitude(const AngularProfile& U, double a, double b) {
    const double al = U.alpha;
    const double Kc = U.value(kHalfPi) / std::sin(al * kHalfPi);
    double kmax = std::numeric_limits<double>::infinity();
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
        // geometric spacing near y = 0, where U behaves like (pi - theta)^{4/3}
        const double y = i < n / 2 ? std::pow(10.0, -8.0 + 8.0 * i / (n / 2)) : double(i) / n;
        const double rl = std::hypot(a, y);
        const double ul = std::pow(rl, al) * U.value(std::atan2(y, -a));
        if (ul > 0.0) kmax = std::min(kmax, std::pow(y, 4.0 / 3.0) / ul);
        const double rr = std::hypot(b, y);
        const double ur = Kc * std::pow(rr, al) * std::sin(al * std::atan2(y, b));
        if (ur > 0.0) kmax = std::min(kmax, y / ur);
    }
    for (int i = 0; i <= n; ++i) {
        const double x = -a + (a + b) * i / n;
        const double r = std::hypot(x, 1.0), th = std::atan2(1.0, x);
        const double u = x < 0.0 ? std::pow(r, al) * U.value(th)
                                  : Kc * std::pow(r, al) * std::sin(al * th);
        if (u > 0.0) kmax = std::min(kmax, 1.0 / u);
    }
    return U.A_eff * std::pow(kmax, 1.5);
}

JumpReport verify_interface_jump(const Field2D& f, Sense sense, double tol, int skip_rows) {
    const Grid2D& g = f.grid;
    const int i0 = g.i0();
    if (i0 < 2 || g.Nx - i0 < 2) throw DomainError("verify_interface_jump: x = 0 too close to an edge");
    const double h = g.hx();
    JumpReport r;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (int j = std::max(1, skip_rows); j < g.Ny; ++j) {
        JumpSample s;
        s.x = 0.0;
        s.y = g.y(j);
        s.behind = (3 * f(i0, j) - 4 * f(i0 - 1, j) + f(i0 - 2, j)) / (2 * h);
        s.ahead = (-3 * f(i0, j) + 4 * f(i0 + 1, j) - f(i0 + 2, j)) / (2 * h);
        s.margin = sense == Sense::Sub ? s.ahead - s.behind : s.behind - s.ahead;
        ++r.samples;
        r.worst_margin = std::min(r.worst_margin, s.margin);
        if (s.margin < -tol) {
            r.ok = false;
            r.offending.push_back(s);
        }
    }
    return r;
}

JumpReport verify_interface_jump(const std::function<double(double, double)>& behind,
                                 const std::function<double(double, double)>& ahead,
                                 const std::vector<std::pair<double, double>>& points,
                                 const std::vector<std::pair<double, double>>& normals, Sense sense,
                                 double tol, double step) {
    if (points.size() != normals.size()) throw DomainError("verify_interface_jump: size mismatch");
    JumpReport r;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto [x, y] = points[k];
        const auto [nx, ny] = normals[k];
        JumpSample s;
        s.x = x;
        s.y = y;
        s.behind = (3 * behind(x, y) - 4 * behind(x - step * nx, y - step * ny) +
                    behind(x - 2 * step * nx, y - 2 * step * ny)) /
                   (2 * step);
        s.ahead = (-3 * ahead(x, y) + 4 * ahead(x + step * nx, y + step * ny) -
                   ahead(x + 2 * step * nx, y + 2 * step * ny)) /
                  (2 * step);
        s.margin = sense == Sense::Sub ? s.ahead - s.behind : s.behind - s.ahead;
        ++r.samples;
        r.worst_margin = std::min(r.worst_margin, s.margin);
        if (s.margin < -tol) {
            r.ok = false;
            r.offending.push_back(s);
        }
    }
    return r;
}

namespace {

double super_minus(const SuperReport& s, double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    const double th = std::clamp(std::atan2(y, x), kHalfPi, pi);
    return std::pow(s.A, 2.0 / 3.0) * std::pow(r, s.alpha) * s.Ubar.value(th);
}

double super_region2(const SuperReport& s, double x, double y) {
    const double r = std::hypot(x, y);
    return s.K * std::pow(r, s.alpha) * std::sin(s.alpha * std::atan2(y, x));
}

double super_region3(const SuperReport& s, double x, double y) {
    const double r = std::hypot(x, y);
    return s.C3 * r * std::sin(s.alpha * std::atan2(y, x)) +
           s.C3_hat * std::pow(r, s.alpha) * std::sin(s.alpha * s.theta_b);
}

}  // namespace

double SuperReport::operator()(double x, double y) const {
    if (x < 0.0) return super_minus(*this, x, y);
    if (std::atan2(y, x) >= theta_b) return super_region2(*this, x, y);
    return super_region3(*this, x, y);
}

SuperReport build_supersolution(double A, double beta, double a, double b, const Grid2D& g) {
    if (!(A > 0.0)) throw DomainError("build_supersolution: A must be positive");
    if (!(beta >= 0.0 && beta < 0.5)) throw DomainError("build_supersolution: beta in [0, 1/2)");
    SuperReport s;
    s.A = A;
    s.beta = beta;
    s.alpha = alpha_of(beta);
    s.a = a;
    s.b = b;
    s.theta_b = std::atan2(1.0, b);
    // V0 = A kbar^{-3/2} bounds V from below; kbar Ubar = A^{2/3} Ubar_1 for every kbar
    s.Ubar = shoot_v2(1.0, s.alpha * s.alpha, kHalfPi);
    const double U0 = s.Ubar.value(kHalfPi);
    const double U0p = s.Ubar.derivative(kHalfPi);
    s.K = std::pow(A, 2.0 / 3.0) * U0 / std::sin(s.alpha * kHalfPi);
    s.robin_lhs = -U0p / U0;
    s.robin_rhs = s.alpha * (-1.0 / std::tan(s.alpha * kHalfPi));
    s.robin_ok = s.robin_lhs <= s.robin_rhs;

    const double r_end = std::hypot(b, 1.0);
    s.C3_hat = 0.0;
    double ratio = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double th = s.theta_b * i / 1000.0;
        ratio = std::max(ratio, std::sin(th) / std::sin(s.alpha * th));
    }
    s.C3 = std::max(s.K * std::pow(r_end, s.alpha - 1.0), ratio);

    // boundary inequalities
    s.left_worst = s.top_worst = s.right_worst = std::numeric_limits<double>::infinity();
    double need = 0.0, worst = std::numeric_limits<double>::infinity();
    auto visit = [&](double x, double y, double data, double& side) {
        const double u = s(x, y);
        const double m = u - data;
        side = std::min(side, m);
        if (m < worst) {
            worst = m;
            s.worst_x = x;
            s.worst_y = y;
        }
        if (data > 0.0) need = std::max(need, u > 0.0 ? data / u : std::numeric_limits<double>::infinity());
    };
    // the corners belong to the top sweep
    for (int i = 1; i < 200; ++i) {
        const double y = i / 200.0;
        visit(-a, y, std::pow(y, 4.0 / 3.0), s.left_worst);
        visit(b, y, y, s.right_worst);
    }
    for (int i = 0; i <= 200; ++i) visit(-a + (a + b) * i / 200.0, 1.0, 1.0, s.top_worst);
    s.boundary_ok = worst >= -1e-12;
    s.suggested_bump = std::max(1.0, need);

    for (int i = 1; i <= 400; ++i) {
        const double r = r_end * i / 400.0;
        const double x = r * std::cos(s.theta_b), y = r * std::sin(s.theta_b);
        s.continuity_defect =
            std::max(s.continuity_defect, std::abs(super_region2(s, x, y) - super_region3(s, x, y)));
    }

    // five-point -Lap over region 2 nodes whose stencil stays inside the region
    s.min_neg_laplacian_region2 = std::numeric_limits<double>::infinity();
    const double hx = g.hx(), hy = g.hy();
    for (int j = 1; j < g.Ny; ++j)
        for (int i = g.i0() + 2; i < g.Nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            auto in2 = [&](double xx, double yy) { return xx > 0.0 && std::atan2(yy, xx) >= s.theta_b; };
            if (!(in2(x, y) && in2(x - hx, y) && in2(x + hx, y) && in2(x, y - hy) && in2(x, y + hy)))
                continue;
            auto f = [&](double xx, double yy) { return super_region2(s, xx, yy); };
            const double lap = (f(x + hx, y) - 2 * f(x, y) + f(x - hx, y)) / (hx * hx) +
                               (f(x, y + hy) - 2 * f(x, y) + f(x, y - hy)) / (hy * hy);
            s.min_neg_laplacian_region2 = std::min(s.min_neg_laplacian_region2, -lap);
        }

    std::vector<std::pair<double, double>> pts, nrm;
    for (int i = 1; i < 100; ++i) {
        const double r = r_end * i / 100.0;
        pts.emplace_back(r * std::cos(s.theta_b), r * std::sin(s.theta_b));
        nrm.emplace_back(-std::sin(s.theta_b), std::cos(s.theta_b));
    }
    s.ray_jump = verify_interface_jump([&](double x, double y) { return super_region3(s, x, y); },
                                       [&](double x, double y) { return super_region2(s, x, y); },
                                       pts, nrm, Sense::Super, 1e-6, 1e-5);
    pts.clear();
    nrm.clear();
    for (int i = 1; i < 100; ++i) {
        pts.emplace_back(0.0, i / 100.0);
        nrm.emplace_back(1.0, 0.0);
    }
    s.origin_jump = verify_interface_jump([&](double x, double y) { return super_minus(s, x, y); },
                                          [&](double x, double y) { return super_region2(s, x, y); },
                                          pts, nrm, Sense::Super, 1e-6, 1e-5);
    return s;
}

}  // namespace clab
