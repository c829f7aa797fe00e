#include "apc/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "apc/field.hpp"
#include "apc/kinetics.hpp"
#include "apc/numeric.hpp"
#include "apc/ode.hpp"
#include "apc/scenario.hpp"
#include "apc/solver.hpp"

namespace apc {

std::vector<double> dense_diffusion_step(const Grid2D& g, const std::vector<double>& values,
                                         double d, double dt) {
    const int n = g.nx * g.ny;
    std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int row, int col) -> double& {
        return matrix[static_cast<std::size_t>(row) * n + col];
    };
    const double wx = d / (g.dx * g.dx);
    const double wy = d / (g.dy * g.dy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.interior(i, j)) continue;
            const int c = g.idx(i, j);
            const struct { int di, dj; double w; } nb[4] = {
                {-1, 0, wx}, {1, 0, wx}, {0, -1, wy}, {0, 1, wy}};
            for (const auto& m : nb) {
                const int ni = i + m.di, nj = j + m.dj;
                if (ni < 0 || ni >= g.nx || nj < 0 || nj >= g.ny) continue; // no-flux wall
                if (!g.interior(ni, nj)) continue;                          // obstacle wall
                at(c, g.idx(ni, nj)) += m.w;
                at(c, c) -= m.w;
            }
        }
    }
    std::vector<double> out(values.size(), 0.0);
    for (int c = 0; c < n; ++c) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += at(c, k) * values[k];
        out[c] = values[c] + dt * acc;
    }
    return out;
}

namespace {

std::string fmt(double v) { return format_shortest(v); }

CheckResult kinetics_conservation(std::mt19937_64& rng, bool flip) {
    std::uniform_real_distribution<double> dist(0.0, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    BehaviorParams p;
    p.delta1 = 0.01;
    p.delta2 = 0.02;
    p.delta3 = 0.005;
    double worst = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
        State6 s{dist(rng), dist(rng), dist(rng), dist(rng), dist(rng), dist(rng)};
        const State6 d =
            detail::reaction_rates(unit(rng), unit(rng), s, p, flip ? -1.0 : 1.0);
        double sum = 0.0, scale = 0.0;
        for (double v : d) {
            sum += v;
            scale += std::abs(v);
        }
        worst = std::max(worst, std::abs(sum) / std::max(1.0, scale));
    }
    return {"kinetics-conservation", worst <= 1e-15,
            "max |sum rhs| (relative) = " + fmt(worst) + ", tol 1e-15"};
}

CheckResult kinetics_quasi_positivity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    BehaviorParams p;
    p.delta1 = 0.01;
    double worst = 0.0;
    for (int trial = 0; trial < 2000; ++trial) {
        State6 s{dist(rng), dist(rng), dist(rng), dist(rng), dist(rng), dist(rng)};
        const int zeroed = trial % 6;
        s[zeroed] = 0.0;
        const State6 d = detail::reaction_rates(unit(rng), unit(rng), s, p, 1.0);
        worst = std::min(worst, d[zeroed]);
    }
    return {"kinetics-quasi-positivity", worst >= 0.0,
            "min derivative at a zero component = " + fmt(worst)};
}

CheckResult schedule_ranges(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> tdist(-5.0, 300.0);
    std::uniform_real_distribution<double> zdist(0.0, 100.0);
    bool ok = true;
    for (int trial = 0; trial < 2000 && ok; ++trial) {
        const double z0 = zdist(rng);
        const double z1 = z0 + 1e-3 + zdist(rng);
        const double ta = tdist(rng), tb = tdist(rng);
        const double va = zeta(std::min(ta, tb), z0, z1);
        const double vb = zeta(std::max(ta, tb), z0, z1);
        ok = va >= 0.0 && vb <= 1.0 && va <= vb; // range + monotone
        const double w = tdist(rng);
        const double x = xi(w);
        ok = ok && x >= 0.0 && x < 1.0;
    }
    return {"schedule-ranges", ok, "xi in [0,1), zeta in [0,1] and nondecreasing"};
}

CheckResult ode_conservation() {
    OdeRun run;
    run.t1 = 25.0;
    const OdeTrajectory traj = integrate(run, TransitionSchedule{}, BehaviorParams{});
    const double drift = conservation_report(traj);
    return {"ode-conservation", drift <= 1e-10,
            "six-component drift = " + fmt(drift) + ", tol 1e-10"};
}

double linear_reduction_error(double dt) {
    // gamma = 1 and every other rate zero: rho4(t) = exp(-t).
    BehaviorParams p;
    p.b1 = p.b2 = p.b3 = p.b4 = p.c1 = p.c2 = 0.0;
    p.alpha12 = p.alpha13 = p.alpha23 = p.alpha32 = 0.0;
    OdeRun run;
    run.t1 = 1.0;
    run.dt = dt;
    const OdeTrajectory traj = integrate(run, TransitionSchedule{}, p);
    const State6& last = traj.states.back();
    const double exact = std::exp(-1.0);
    return std::max(std::abs(last[kDaily] - exact), std::abs(last[kAlert] - (1.0 - exact)));
}

CheckResult rk4_order() {
    const double e1 = linear_reduction_error(0.25);
    const double e2 = linear_reduction_error(0.125);
    const double order = std::log2(e1 / e2);
    return {"rk4-order", order >= 3.7 && order <= 4.3,
            "observed order = " + fmt(order) + ", expected in [3.7, 4.3]"};
}

CheckResult direction_divergence() {
    double worst = -1e30;
    for (const char* name : {"scenario1", "scenario2", "scenario3"}) {
        const ScenarioConfig cfg = builtin_scenario(name);
        const Grid2D g = build_grid(cfg.geometry);
        double tx = 0, ty = 0;
        g.default_target(cfg.geometry.target_offset, tx, ty);
        const DirectionField df = direction_field(g, tx, ty);
        worst = std::max(worst, check_divergence(df, g));
    }
    return {"direction-divergence", worst <= 1e-8,
            "max discrete divergence = " + fmt(worst) + ", tol 1e-8"};
}

CheckResult diffusion_oracle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int trials = 0;
    for (int nx = 3; nx <= 5; ++nx) {
        for (int ny = 3; ny <= 5; ++ny) {
            for (int rep = 0; rep < 12; ++rep, ++trials) {
                GeometrySpec spec;
                spec.width = 1.0;
                spec.height = 1.0;
                spec.nx = nx;
                spec.ny = ny;
                spec.exit_side = Side::None;
                if (rep % 3 == 2) {
                    // Knock out one interior cell to exercise obstacle walls.
                    const double cx = (0.5 + std::floor(unit(rng) * nx)) / nx;
                    const double cy = (0.5 + std::floor(unit(rng) * ny)) / ny;
                    spec.obstacles.push_back(
                        {cx - 0.2 / nx, cy - 0.2 / ny, cx + 0.2 / nx, cy + 0.2 / ny});
                }
                const Grid2D g = build_grid(spec);

                const double d = 0.01 + 0.1 * unit(rng);
                const double h = std::min(g.dx, g.dy);
                const double dt = 0.5 * h * h / (4.0 * d);

                DensityField f;
                f.resize(g.nx, g.ny);
                std::vector<double> ref(f.rho[0].size(), 0.0);
                for (int j = 0; j < g.ny; ++j) {
                    for (int i = 0; i < g.nx; ++i) {
                        if (!g.interior(i, j)) continue;
                        const double v = unit(rng);
                        f.rho[kPanic][g.idx(i, j)] = v;
                        ref[g.idx(i, j)] = v;
                    }
                }
                const std::vector<double> expect = dense_diffusion_step(g, ref, d, dt);

                TransportParams tp;
                tp.d = {0.0, d, 0.0, 0.0, 0.0};
                tp.v2max = tp.v3max = 0.0;
                tp.v_out = {0.0, 0.0, 0.0, 0.0, 0.0};
                BehaviorParams inert;
                inert.b1 = inert.b2 = inert.b3 = inert.b4 = inert.c1 = inert.c2 = 0.0;
                inert.alpha12 = inert.alpha13 = inert.alpha23 = inert.alpha32 = 0.0;
                TransitionSchedule off;
                off.gamma.value = 0.0;

                double tx = 0, ty = 0;
                g.default_target(0.25, tx, ty);
                const DirectionField df = direction_field(g, tx, ty);
                MassLedger ledger;
                FluxWorkspace w;
                w.resize(g);
                step(f, ledger, 0.0, dt, g, df, tp, off, inert, w);

                for (std::size_t c = 0; c < ref.size(); ++c) {
                    worst = std::max(worst, std::abs(f.rho[kPanic][c] - expect[c]));
                }
            }
        }
    }
    return {"diffusion-oracle", worst <= 1e-14,
            "max |step - dense matrix| = " + fmt(worst) + " over " + std::to_string(trials) +
                " trials, tol 1e-14"};
}

CheckResult zero_transport_equivalence() {
    ScenarioConfig cfg;
    cfg.bumps.clear();
    cfg.initial_uniform = true;
    cfg.geometry.nx = 8;
    cfg.geometry.ny = 4;
    cfg.transport.d = {0, 0, 0, 0, 0};
    cfg.transport.v2max = cfg.transport.v3max = 0.0;
    cfg.transport.v_out = {0, 0, 0, 0, 0};
    cfg.t_end = 10.0;
    cfg.dt_max = 0.01;
    cfg.snapshot_times.clear();
    cfg.output_interval = 10.0;

    const RunResult res = run_scenario(cfg);
    const Grid2D& g = res.grid;

    const DensityField f0 = initial_field(cfg, g);
    const double theta0 = f0.rho[kDaily][g.idx(1, 1)];

    OdeRun run;
    run.t1 = 10.0;
    run.dt = 0.01;
    run.method = OdeMethod::Euler;
    run.initial = {0, 0, 0, theta0, 0, 0};
    const OdeTrajectory traj = integrate(run, cfg.schedule, cfg.behavior);
    const State6& ode = traj.states.back();

    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            for (int s = 0; s < 5; ++s) {
                worst = std::max(
                    worst, std::abs(res.final_field.rho[s][g.idx(i, j)] - ode[s]));
            }
        }
    }
    return {"zero-transport-equivalence", worst <= 1e-6,
            "max |pde - ode| at t=10 = " + fmt(worst) + ", tol 1e-6"};
}

// A 2x1 room on a 40x20 grid: small enough to run in milliseconds, fine
// enough (h = 0.05) that the CFL bound binds and a bad safety factor
// actually destabilizes the scheme.
std::string small_room_config() {
    return "geometry.width = 2\n"
           "geometry.height = 1\n"
           "geometry.nx = 40\n"
           "geometry.ny = 20\n"
           "geometry.exit_side = right\n"
           "geometry.exit_from = 0.3\n"
           "geometry.exit_to = 0.7\n"
           "geometry.target_offset = 0.25\n"
           "initial.bump = 1,0.5,0.3,1\n"
           "run.snapshots =\n"
           "run.output_interval = 1\n";
}

CheckResult solver_invariants(double cfl_safety) {
    try {
        const ScenarioConfig cfg = parse_config(
            small_room_config(),
            {"run.t_end=10", "run.cfl_safety=" + format_shortest(cfl_safety)});
        const RunResult res = run_scenario(cfg);
        std::ostringstream detail;
        bool ok = true;
        if (res.stats.min_density < -1e-12) ok = false;
        detail << "min density = " << fmt(res.stats.min_density);
        if (res.stats.max_mass_step_increase > 1e-14) ok = false;
        detail << ", max mass step increase = " << fmt(res.stats.max_mass_step_increase);
        const double closure =
            std::abs(res.ledger.closure_residual(res.stats.initial_mass)) /
            res.stats.initial_mass;
        if (closure > 1e-10) ok = false;
        detail << ", ledger residual (relative) = " << fmt(closure);
        for (const TimeseriesRow& row : res.series) {
            if (row.total_mass < -1e-14 || row.total_mass > 1.0 + 1e-14) ok = false;
        }
        return {"solver-invariants", ok, detail.str()};
    } catch (const SolverError& e) {
        return {"solver-invariants", false, std::string("solver abort: ") + e.what()};
    }
}

} // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& opt) {
    std::mt19937_64 rng(opt.seed);
    std::vector<CheckResult> out;
    out.push_back(kinetics_conservation(rng, opt.flip_h_sign));
    out.push_back(kinetics_quasi_positivity(rng));
    out.push_back(schedule_ranges(rng));
    out.push_back(ode_conservation());
    out.push_back(rk4_order());
    out.push_back(direction_divergence());
    out.push_back(diffusion_oracle(rng));
    out.push_back(zero_transport_equivalence());
    out.push_back(solver_invariants(opt.cfl_safety));
    return out;
}

} // namespace apc
