/**
 * @file parabolic.cpp
 * @brief IMEX trajectories and the comparison decay diagnostic
 */

#include "clab/parabolic.hpp"

#include "clab/errors.hpp"
#include "clab/io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace clab {

DtBounds dt_bounds(const Grid2D& g, const std::vector<double>& jbar, const Field2D& floor) {
    DtBounds d;
    d.diffusion = std::min(g.hx() * g.hx(), g.hy() * g.hy()) / 4.0;
    double fmin = std::numeric_limits<double>::infinity(), jmax = 0.0;
    for (int i = 1; i < g.Nx; ++i) {
        if (jbar[i] <= 0.0) continue;
        jmax = std::max(jmax, jbar[i]);
        for (int j = 1; j < g.Ny; ++j) fmin = std::min(fmin, floor(i, j));
    }
    d.source = jmax > 0.0 ? std::pow(fmin, 1.5) / (2.0 * jmax)
                          : std::numeric_limits<double>::infinity();
    return d;
}

ImexStepper::ImexStepper(const Grid2D& g, double dt, std::vector<double> jbar, Field2D floor)
    : dt_(dt), jbar_(std::move(jbar)), floor_(std::move(floor)), boundary_(g),
      solver_(g, 1.0 / dt) {
    if (!(dt > 0.0)) throw DomainError("ImexStepper: dt must be positive");
    impose_dirichlet(boundary_);
}

Field2D ImexStepper::step(const Field2D& u, StepReport* rep) const {
    const Grid2D& g = solver_.grid();
    std::vector<double> rhs(g.nodes(), 0.0);
    for (int j = 1; j < g.Ny; ++j)
        for (int i = 1; i < g.Nx; ++i) {
            const double v = u(i, j);
            double src = 0.0;
            if (jbar_[i] > 0.0 && v > 0.0) src = jbar_[i] / std::sqrt(std::max(v, floor_(i, j)));
            rhs[g.idx(i, j)] = v / dt_ - src;
        }
    Field2D next = solver_.solve(rhs, boundary_);
    StepReport r;
    for (int j = 1; j < g.Ny; ++j)
        for (int i = 1; i < g.Nx; ++i)
            if (next(i, j) < 0.0) {
                next(i, j) = 0.0;
                ++r.negative_nodes;
            }
    r.negative_fraction = double(r.negative_nodes) / double((g.Nx - 1) * (g.Ny - 1));
    if (rep) *rep = r;
    return next;
}

Field2D step_imex(const Field2D& u, double dt, const std::vector<double>& jbar, const Field2D& floor,
                  StepReport* rep) {
    return ImexStepper(u.grid, dt, jbar, floor).step(u, rep);
}

namespace {

double sup_distance(const Field2D& a, const Field2D& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.u.size(); ++k) d = std::max(d, std::abs(a.u[k] - b.u[k]));
    return d;
}

long step_count(double T, double dt) {
    if (!(T > 0.0 && dt > 0.0)) throw DomainError("evolve: T and dt must be positive");
    return std::max(1L, std::lround(T / dt));
}

}  // namespace

Trajectory evolve(const Field2D& u0, double T, double dt, const std::vector<double>& jbar,
                  const Field2D& floor, const std::optional<Field2D>& reference,
                  int snapshot_every) {
    const long n = step_count(T, dt);
    ImexStepper st(u0.grid, dt, jbar, floor);
    Trajectory tr;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Field2D u = u0;
    impose_dirichlet(u);
    auto record = [&](long k) {
        tr.t.push_back(k * dt);
        tr.distance.push_back(reference ? sup_distance(u, *reference) : nan);
        tr.weighted.push_back(nan);
        if (snapshot_every > 0 && k % snapshot_every == 0) {
            tr.snapshots.push_back(u);
            tr.snapshot_t.push_back(k * dt);
        }
    };
    record(0);
    for (long k = 1; k <= n; ++k) {
        StepReport r;
        u = st.step(u, &r);
        tr.negative_nodes += r.negative_nodes;
        record(k);
    }
    tr.final_field = std::move(u);
    return tr;
}

double weighted_positive_norm(const Field2D& w, double gamma) {
    const Grid2D& g = w.grid;
    double s = 0.0;
    for (int j = 1; j < g.Ny; ++j)
        for (int i = 1; i < g.Nx; ++i) {
            const double p = std::max(w(i, j), 0.0);
            if (p == 0.0) continue;
            const double d = boundary_distance(g, g.x(i), g.y(j));
            const double q = p / std::pow(d, gamma);
            s += q * q;
        }
    return std::sqrt(s * g.hx() * g.hy());
}

DecayReport comparison_decay(const Field2D& u0, const Field2D& v0, double nu, double T, double dt,
                             const std::vector<double>& jbar, const Field2D& floor, double t_min) {
    if (!(nu > 0.0 && nu <= 4.0 / 3.0)) throw DomainError("comparison_decay: nu in (0, 4/3]");
    const Grid2D& g = u0.grid;
    for (std::size_t k = 0; k < u0.u.size(); ++k)
        if (u0.u[k] > v0.u[k]) throw DomainError("comparison_decay: needs u0 <= v0");
    DecayReport rep;
    rep.gamma = std::min(1.5 * nu, 1.0);
    rep.rate = (2.0 * rep.gamma + 1.0) / 4.0;
    rep.t_min = t_min;
    Field2D diff(g);
    for (std::size_t k = 0; k < diff.u.size(); ++k) diff.u[k] = v0.u[k] - u0.u[k];
    rep.initial_norm = weighted_positive_norm(diff, 0.0);

    const long n = step_count(T, dt);
    ImexStepper st(g, dt, jbar, floor);
    Field2D u = u0, v = v0;
    impose_dirichlet(u);
    impose_dirichlet(v);
    auto record = [&](long k) {
        double rev = 0.0;
        for (std::size_t q = 0; q < u.u.size(); ++q) {
            diff.u[q] = v.u[q] - u.u[q];
            rev = std::max(rev, -diff.u[q]);
        }
        rep.max_reverse = std::max(rep.max_reverse, rev);
        if (rev > 0.0) {
            ++rep.order_violations;
            throw NumericError("comparison_decay: order lost at t = " + fmt17(k * dt) +
                               " by " + fmt17(rev));
        }
        const double t = k * dt;
        const double w = weighted_positive_norm(diff, rep.gamma);
        rep.lower.t.push_back(t);
        rep.lower.weighted.push_back(w);
        rep.lower.distance.push_back(std::numeric_limits<double>::quiet_NaN());
        if (t >= t_min && rep.initial_norm > 0.0)
            rep.C = std::max(rep.C, w * std::pow(t, rep.rate) / rep.initial_norm);
    };
    record(0);
    for (long k = 1; k <= n; ++k) {
        StepReport a, b;
        u = st.step(u, &a);
        v = st.step(v, &b);
        rep.lower.negative_nodes += a.negative_nodes;
        rep.upper.negative_nodes += b.negative_nodes;
        record(k);
    }
    rep.bounded = std::isfinite(rep.C);
    rep.lower.final_field = std::move(u);
    rep.upper.final_field = std::move(v);
    rep.upper.t = rep.lower.t;
    return rep;
}

std::string trajectory_csv(const Trajectory& tr) {
    std::ostringstream os;
    os << "t,distance_to_reference,weighted_positive_part_norm\n";
    for (std::size_t k = 0; k < tr.t.size(); ++k)
        os << fmt17(tr.t[k]) << "," << fmt17(tr.distance[k]) << "," << fmt17(tr.weighted[k]) << "\n";
    return os.str();
}

}  // namespace clab
