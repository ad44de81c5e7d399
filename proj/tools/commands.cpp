/**
 * @file commands.cpp
 * @brief solve1d, bifurcation, solve2d, wings, parabolic, verify-sub, verify-super
 */

#include "commands.hpp"

#include "clab/closed_forms.hpp"
#include "clab/errors.hpp"
#include "clab/io.hpp"
#include "clab/pipeline.hpp"
#include "clab/timemap.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace clab::cli {

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"solve1d", "bifurcation", "solve2d", "wings",
                                                   "parabolic", "verify-sub", "verify-super"};
    return names;
}

namespace {

/// NaN and infinities become null, since JSON has no spelling for them.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class RunDir {
public:
    RunDir(const std::string& command, const RunConfig& cfg)
        : path_(fs::path(cfg.text("outdir")) / command / cfg.run_id()) {
        fs::create_directories(path_);
        write("config.echo", cfg.echo());
    }
    void write(const std::string& name, const std::string& content) const {
        std::ofstream f(path_ / name, std::ios::binary);
        if (!f) throw DomainError("cannot write " + (path_ / name).string());
        f << content;
    }
    void json_file(const std::string& name, const json& j) const { write(name, j.dump(2) + "\n"); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

IterateOptions iterate_options(const RunConfig& cfg) {
    IterateOptions o;
    o.tol = cfg.real("tol");
    o.max_iter = cfg.integer("max_iter");
    if (!(o.tol > 0.0)) throw DomainError("tol must be positive");
    if (o.max_iter < 1) throw DomainError("max_iter must be at least 1");
    return o;
}

json params_json(const RunConfig& cfg) {
    json p = json::object();
    for (const auto& [k, v] : cfg.explicit_values())
        if (k != "outdir") p[k] = v;
    return p;
}

json jump_json(const JumpReport& r) {
    return {{"ok", r.ok}, {"worst_margin", num(r.worst_margin)}, {"samples", r.samples},
            {"offending", r.offending.size()}};
}

int cmd_solve1d(const RunConfig& cfg, std::ostream& out) {
    ClosedForm1D sol;
    std::function<double(double)> jf;
    if (cfg.has("q")) {
        if (!cfg.has("lambda")) throw DomainError("solve1d: q needs lambda");
        const double q = cfg.real("q"), lam = cfg.real("lambda");
        sol = power_solution_nonautonomous(q, lam);
        jf = [q, lam](double y) { return lam * std::pow(y, q); };
    } else {
        const double j = cfg.real("j");
        if (!(j > 0.0)) throw DomainError("solve1d: j must be positive, got " + fmt17(j));
        if (j == 4.0 / 9.0)
            sol = flat_solution_1d();
        else if (j > 4.0 / 9.0)
            sol = free_boundary_solution_1d(j);
        else
            sol = subcritical_solution_1d(j);
        jf = [j](double) { return j; };
    }
    const int n = cfg.integer("points");
    if (n < 3) throw DomainError("points must be at least 3");
    RunDir dir("solve1d", cfg);
    dir.write("profile.csv", profile_csv(sol, n));
    json s;
    s["params"] = params_json(cfg);
    s["regime"] = to_string(sol.regime);
    s["xi"] = num(sol.xi);
    s["amp"] = num(sol.amp);
    s["K0"] = num(sol.derivative(0.0));
    s["is_subsolution"] = sol.is_subsolution;
    if (sol.h_constants) s["h_constants"] = {num(sol.h_constants->first), num(sol.h_constants->second)};
    s["residual"] = num(sol.regime == Regime1D::Subcritical ? NAN : residual_1d(sol, jf, n).max_residual);
    dir.json_file("summary.json", s);
    out << dir.path().string() << "\n";
    return exit_code::ok;
}

int cmd_bifurcation(const RunConfig& cfg, std::ostream& out) {
    const double V0 = cfg.real("V0"), R = cfg.real("R");
    if (!(V0 > 0.0 && R > 0.0)) throw DomainError("bifurcation: V0 and R must be positive");
    const double l1 = lambda_one(R), ls = lambda_star(R);
    const double lo = cfg.maybe_real("lambda_min").value_or(0.5 * l1);
    const double hi = cfg.maybe_real("lambda_max").value_or(2.0 * ls);
    const int n = cfg.integer("n_lambda");
    if (!(lo > 0.0 && hi > lo) || n < 2)
        throw DomainError("bifurcation: need 0 < lambda_min < lambda_max and n_lambda >= 2");
    std::vector<double> lams;
    for (int k = 0; k < n; ++k) lams.push_back(lo + (hi - lo) * k / (n - 1));
    // the two critical values are always tabulated exactly
    for (double c : {l1, ls})
        if (c >= lo && c <= hi) lams.push_back(c);
    std::sort(lams.begin(), lams.end());
    lams.erase(std::unique(lams.begin(), lams.end()), lams.end());
    const auto pts = bifurcation_table(V0, R, lams);
    RunDir dir("bifurcation", cfg);
    dir.write("bifurcation.csv", bifurcation_csv(pts));
    json s;
    s["params"] = params_json(cfg);
    s["lambda1"] = num(l1);
    s["lambda_star"] = num(ls);
    s["gamma_rF"] = num(clab::gamma(r_f()));
    s["rows"] = pts.size();
    dir.json_file("summary.json", s);
    out << dir.path().string() << "\n";
    return exit_code::ok;
}

Solve2DOptions solve2d_options(const RunConfig& cfg) {
    Solve2DOptions o;
    o.a = cfg.real("a");
    o.b = cfg.real("b");
    o.A = cfg.maybe_real("A");
    o.beta = cfg.real("beta");
    o.Nx = cfg.integer("Nx");
    o.Ny = cfg.integer("Ny");
    o.iterate = iterate_options(cfg);
    return o;
}

std::string fits_csv(const Field2D& u, int m) {
    std::ostringstream os;
    os << "x,exponent,rows_used\n";
    const Grid2D& g = u.grid;
    for (int i = 1; i < g.Nx; ++i) {
        const auto f = flat_exponent_fit(u, g.x(i), m);
        os << fmt17(g.x(i)) << "," << fmt17(f.exponent) << "," << f.rows_used << "\n";
    }
    return os.str();
}

std::string flux_csv(const std::vector<std::pair<double, double>>& flux) {
    std::ostringstream os;
    os << "x,flux\n";
    for (auto [x, f] : flux) os << fmt17(x) << "," << fmt17(f) << "\n";
    return os.str();
}

int cmd_solve2d(const RunConfig& cfg, std::ostream& out) {
    const Solve2DOptions o = solve2d_options(cfg);
    Solve2DResult r = run_solve2d(o);
    RunDir dir("solve2d", cfg);
    dir.write("u_min.csv", field_csv(r.between.u_min, "u_min"));
    dir.write("u_max.csv", field_csv(r.between.u_max, "u_max"));
    dir.write("sub.csv", field_csv(r.sub, "sub"));
    dir.write("super.csv", field_csv(r.super, "super"));
    const int m = std::max(3, r.grid.Ny / 16);
    dir.write("exponent_fits.csv", fits_csv(r.between.u_min, m));
    dir.write("flux.csv", flux_csv(r.flux));
    dir.write("angular.csv", angular_csv(r.U, 2001));

    const double gap_tol = 1e-5;
    json s;
    s["params"] = params_json(cfg);
    s["A"] = num(r.A);
    s["A_max"] = num(r.A_max);
    s["alpha"] = num(r.alpha);
    s["eps"] = num(r.U.eps);
    s["iterations"] = {{"from_below", r.between.from_below.iterations},
                       {"from_above", r.between.from_above.iterations}};
    s["residual"] = num(r.residual);
    s["exponent_fits"] = {{"x_minus", num(r.fit_minus.x)}, {"minus", num(r.fit_minus.exponent)},
                          {"x_plus", num(r.fit_plus.x)}, {"plus", num(r.fit_plus.exponent)},
                          {"rows", m}};
    json fp = json::array();
    for (auto [x, f] : r.flux) fp.push_back({num(x), num(f)});
    s["flux_profile"] = fp;
    json jumps = json::array();
    for (const auto& jj : r.assembly.jumps)
        jumps.push_back({{"theta", num(jj.theta)}, {"jump", num(jj.jump)}, {"ok", jj.jump >= 0.0}});
    const bool gap_ok = r.between.gap < gap_tol;
    const bool nd_ok = r.nondegeneracy.min_ratio > 0.0;
    s["verification"] = {
        {"ordering", {{"ok", r.order.ok}, {"worst", num(r.order.worst)}}},
        {"gap", {{"ok", gap_ok}, {"value", num(r.between.gap)}, {"tol", gap_tol}}},
        {"residual", num(r.residual)},
        {"nondegeneracy", {{"ok", nd_ok}, {"min_ratio", num(r.nondegeneracy.min_ratio)},
                           {"x", num(r.nondegeneracy.x)}, {"y", num(r.nondegeneracy.y)}}},
        {"interface_jumps", {{"x0", jump_json(r.sub_jump)}, {"angular", jumps}}},
        {"robin", {{"lhs", num(r.assembly.robin_lhs)}, {"rhs", num(r.assembly.robin_rhs)}}},
        {"all_pass", r.order.ok && gap_ok && nd_ok && r.sub_jump.ok}};
    dir.json_file("summary.json", s);
    out << dir.path().string() << "\n";
    return exit_code::ok;
}

int cmd_wings(const RunConfig& cfg, std::ostream& out) {
    const double a = cfg.real("a"), b = cfg.real("b");
    const auto betas = cfg.reals("betas");
    double A = 0.0;
    if (auto given = cfg.maybe_real("A")) {
        A = *given;
    } else {
        A = INFINITY;
        for (double beta : betas) A = std::min(A, feasible_amplitude(beta, a, b));
        A *= kDefaultAmplitudeFraction;
    }
    const Grid2D base(a, b, cfg.integer("Nx"), cfg.integer("Ny"));
    const auto rows =
        wings_experiment(base, A, betas, cfg.integer("levels"), subsolution_floor(A),
                         iterate_options(cfg));
    RunDir dir("wings", cfg);
    dir.write("wings.csv", wings_csv(rows));
    json s;
    s["params"] = params_json(cfg);
    s["A"] = num(A);
    json t = json::array();
    for (const auto& r : rows)
        t.push_back({{"beta", num(r.beta)}, {"Nx", r.Nx}, {"Ny", r.Ny},
                     {"min_cathode_flux", num(r.min_cathode_flux)}, {"flux_mid", num(r.flux_mid)},
                     {"fit_minus", num(r.fit_minus)}, {"fit_plus", num(r.fit_plus)},
                     {"iterations", r.iterations}});
    s["rows"] = t;
    dir.json_file("summary.json", s);
    out << dir.path().string() << "\n";
    return exit_code::ok;
}

int cmd_parabolic(const RunConfig& cfg, std::ostream& out) {
    ParabolicOptions o;
    o.a = cfg.real("a");
    o.b = cfg.real("b");
    o.A = cfg.maybe_real("A");
    o.beta = cfg.real("beta");
    o.Nx = cfg.integer("Nx");
    o.Ny = cfg.integer("Ny");
    o.dt = cfg.maybe_real("dt");
    o.T = cfg.maybe_real("T").value_or(0.0);
    o.nu = cfg.real("nu");
    o.t_min = cfg.real("t_min");
    o.iterate = iterate_options(cfg);
    const ParabolicResult r = run_parabolic(o);

    RunDir dir("parabolic", cfg);
    dir.write("trajectory.csv", trajectory_csv(r.to_limit));
    std::ostringstream dc;
    dc << "t,weighted_positive_part_norm,scaled\n";
    const auto& d = r.decay;
    for (std::size_t k = 0; k < d.lower.t.size(); ++k) {
        const double t = d.lower.t[k], w = d.lower.weighted[k];
        const double sc = d.initial_norm > 0.0 ? w * std::pow(t, d.rate) / d.initial_norm : NAN;
        dc << fmt17(t) << "," << fmt17(w) << "," << fmt17(sc) << "\n";
    }
    dir.write("decay.csv", dc.str());
    json s;
    s["params"] = params_json(cfg);
    s["A"] = num(r.A);
    s["dt"] = num(r.dt);
    s["T"] = num(r.T);
    s["steps"] = r.steps;
    s["dt_bounds"] = {{"diffusion", num(r.bounds.diffusion)}, {"source", num(r.bounds.source)}};
    s["distance"] = {{"initial", num(r.to_limit.distance.front())},
                     {"final", num(r.to_limit.distance.back())},
                     {"nonincreasing", r.distance_monotone},
                     {"negative_clamps", r.to_limit.negative_nodes}};
    s["decay"] = {{"gamma", num(d.gamma)}, {"rate", num(d.rate)}, {"t_min", num(d.t_min)},
                  {"initial_norm", num(d.initial_norm)}, {"C", num(d.C)},
                  {"bounded", d.bounded}, {"order_violations", d.order_violations},
                  {"max_reverse", num(d.max_reverse)}};
    dir.json_file("summary.json", s);
    out << dir.path().string() << "\n";
    return exit_code::ok;
}

int cmd_verify_sub(const RunConfig& cfg, std::ostream& out) {
    const double beta = cfg.real("beta"), a = cfg.real("a"), b = cfg.real("b");
    AssemblyReport rep;
    const AngularProfile U = find_subsolution(beta, default_eps_list(), &rep);
    const double A_max = max_amplitude(U, a, b);
    const double A = cfg.maybe_real("A").value_or(kDefaultAmplitudeFraction * A_max);
    if (!(A > 0.0) || A > A_max)
        throw InfeasibleError("verify-sub: A = " + fmt17(A) + " outside (0, " + fmt17(A_max) + "]");
    const Grid2D g(a, b, cfg.integer("Nx"), cfg.integer("Ny"));
    const Field2D sub = subsolution_field(g, A, beta);
    const JumpReport jr = verify_interface_jump(sub, Sense::Sub, 1e-8, 1);
    RunDir dir("verify-sub", cfg);
    dir.write("angular.csv", angular_csv(U, 2001));
    dir.write("sub.csv", field_csv(sub, "sub"));
    json jumps = json::array();
    bool junctions_ok = true;
    for (const auto& jj : rep.jumps) {
        junctions_ok = junctions_ok && jj.jump >= 0.0;
        jumps.push_back({{"theta", num(jj.theta)}, {"jump", num(jj.jump)},
                         {"value_gap", num(jj.value_gap)}});
    }
    json s;
    s["params"] = params_json(cfg);
    s["alpha"] = num(U.alpha);
    s["eps"] = num(U.eps);
    s["single_piece"] = U.single_piece;
    s["A"] = num(A);
    s["A_max"] = num(A_max);
    s["robin"] = {{"lhs", num(rep.robin_lhs)}, {"rhs", num(rep.robin_rhs)},
                  {"margin", num(rep.robin_rhs - rep.robin_lhs)}};
    s["angular_defect"] = {{"worst", num(rep.angular.worst)}, {"theta", num(rep.angular.theta)},
                           {"ok", rep.angular.ok}};
    s["junctions"] = jumps;
    s["interface_x0"] = jump_json(jr);
    s["all_pass"] = junctions_ok && rep.angular.ok && jr.ok;
    dir.json_file("summary.json", s);
    out << dir.path().string() << "\n";
    return exit_code::ok;
}

int cmd_verify_super(const RunConfig& cfg, std::ostream& out) {
    const double beta = cfg.real("beta"), a = cfg.real("a"), b = cfg.real("b");
    const double A = cfg.maybe_real("A").value_or(
        kDefaultAmplitudeFraction * feasible_amplitude(beta, a, b));
    const Grid2D g(a, b, cfg.integer("Nx"), cfg.integer("Ny"));
    const SuperReport r = build_supersolution(A, beta, a, b, g);
    RunDir dir("verify-super", cfg);
    dir.write("super.csv", field_csv(sample(g, [&](double x, double y) { return r(x, y); }), "super"));
    json s;
    s["params"] = params_json(cfg);
    s["A"] = num(A);
    s["alpha"] = num(r.alpha);
    s["theta_b"] = num(r.theta_b);
    s["K"] = num(r.K);
    s["C3"] = num(r.C3);
    s["C3_hat"] = num(r.C3_hat);
    s["robin"] = {{"lhs", num(r.robin_lhs)}, {"rhs", num(r.robin_rhs)},
                  {"margin", num(r.robin_rhs - r.robin_lhs)}, {"ok", r.robin_ok}};
    s["boundary"] = {{"ok", r.boundary_ok}, {"left_worst", num(r.left_worst)},
                     {"top_worst", num(r.top_worst)}, {"right_worst", num(r.right_worst)},
                     {"worst_x", num(r.worst_x)}, {"worst_y", num(r.worst_y)},
                     {"suggested_bump", num(r.suggested_bump)}};
    s["continuity_defect"] = num(r.continuity_defect);
    s["min_neg_laplacian_region2"] = num(r.min_neg_laplacian_region2);
    s["ray_jump"] = jump_json(r.ray_jump);
    s["origin_jump"] = jump_json(r.origin_jump);
    s["all_pass"] = r.robin_ok && r.boundary_ok && r.ray_jump.ok && r.origin_jump.ok;
    dir.json_file("summary.json", s);
    out << dir.path().string() << "\n";
    return exit_code::ok;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err) {
    try {
        if (command == "solve1d") return cmd_solve1d(cfg, out);
        if (command == "bifurcation") return cmd_bifurcation(cfg, out);
        if (command == "solve2d") return cmd_solve2d(cfg, out);
        if (command == "wings") return cmd_wings(cfg, out);
        if (command == "parabolic") return cmd_parabolic(cfg, out);
        if (command == "verify-sub") return cmd_verify_sub(cfg, out);
        if (command == "verify-super") return cmd_verify_super(cfg, out);
        err << "unknown command '" << command << "'\n";
        return exit_code::validation;
    } catch (const DtRejected& e) {
        err << "error: " << e.what() << "\nsafe dt = " << fmt17(e.safe) << "\n";
        return exit_code::validation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::validation;
    } catch (const RegimeError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::validation;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return exit_code::infeasible;
    } catch (const NumericError& e) {
        err << "no convergence: " << e.what() << "\n";
        return exit_code::nonconvergence;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::validation;
    }
}

}  // namespace clab::cli
