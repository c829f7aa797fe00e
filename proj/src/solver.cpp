#include "apc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace apc {

namespace {

constexpr double kClipBand = -1e-12;   // clipped to zero above this
constexpr double kAbortBand = -1e-8;   // hard failure below this

[[noreturn]] void throw_located(const DensityField& f, const Grid2D& g, double t,
                                const char* what) {
    for (int s = 0; s < 5; ++s) {
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                const double v = f.rho[s][g.idx(i, j)];
                if (!std::isfinite(v) || v <= kAbortBand) {
                    throw SolverError(std::string("solver: ") + what + " rho" +
                                      std::to_string(s + 1) + "=" + format_full(v) +
                                      " at cell (" + std::to_string(i) + "," +
                                      std::to_string(j) + "), t=" + format_full(t));
                }
            }
        }
    }
    throw SolverError(std::string("solver: ") + what + " at t=" + format_full(t));
}

} // namespace

void FluxWorkspace::resize(const Grid2D& g) {
    const std::size_t nfx = static_cast<std::size_t>(g.nx + 1) * g.ny;
    const std::size_t nfy = static_cast<std::size_t>(g.nx) * (g.ny + 1);
    for (auto& v : fx) v.assign(nfx, 0.0);
    for (auto& v : fy) v.assign(nfy, 0.0);
    rho_tilde.assign(static_cast<std::size_t>(g.nx) * g.ny, 0.0);
}

void assemble_fluxes(const DensityField& f, const Grid2D& g, const DirectionField& df,
                     const TransportParams& tp, FluxWorkspace& w) {
    const int nx = g.nx, ny = g.ny;
    w.exit_outflow_rate = 0.0;
    w.max_rho_tilde = 0.0;
    w.clamp_activations = 0;

    double* rt = w.rho_tilde.data();
    {
        const double* r0 = f.rho[0].data();
        const double* r1 = f.rho[1].data();
        const double* r2 = f.rho[2].data();
        const double* r3 = f.rho[3].data();
        const double* r4 = f.rho[4].data();
        double mx = 0.0;
        const std::size_t n = w.rho_tilde.size();
        for (std::size_t c = 0; c < n; ++c) {
            const double v = ((r0[c] + r1[c]) + (r2[c] + r3[c])) + r4[c];
            rt[c] = v;
            mx = std::max(mx, v);
        }
        w.max_rho_tilde = mx;
    }

    for (int s = 0; s < 5; ++s) {
        const bool advects = (s == kPanic || s == kControl);
        const double vmax = (s == kPanic) ? tp.v2max : (s == kControl ? tp.v3max : 0.0);
        const double dcx = tp.d[s] * g.dy / g.dx;
        const double dcy = tp.d[s] * g.dx / g.dy;
        const double* r = f.rho[s].data();
        double* fxs = w.fx[s].data();
        double* fys = w.fy[s].data();

        for (int j = 0; j < ny; ++j) {
            const int row = j * nx;
            const int frow = j * (nx + 1);
            for (int i = 0; i <= nx; ++i) {
                const int fi = frow + i;
                if (!g.open_x[fi]) {
                    fxs[fi] = 0.0;
                    continue;
                }
                const int c = row + i; // right cell; left cell is c-1
                double flux = -dcx * (r[c] - r[c - 1]);
                if (advects) {
                    double q = 1.0 - 0.5 * (rt[c - 1] + rt[c]);
                    if (q < 0.0 && tp.clamp_velocity) {
                        q = 0.0;
                        ++w.clamp_activations;
                    }
                    const double u = vmax * q * df.face_nu_x[fi];
                    flux += (std::max(u, 0.0) * r[c - 1] + std::min(u, 0.0) * r[c]) * g.dy;
                }
                fxs[fi] = flux;
            }
        }
        for (int j = 0; j <= ny; ++j) {
            const int row = j * nx; // lower cell row start is (j-1)*nx
            for (int i = 0; i < nx; ++i) {
                const int fi = row + i;
                if (!g.open_y[fi]) {
                    fys[fi] = 0.0;
                    continue;
                }
                const int c = row + i;       // upper cell
                const int cl = c - nx;       // lower cell
                double flux = -dcy * (r[c] - r[cl]);
                if (advects) {
                    double q = 1.0 - 0.5 * (rt[cl] + rt[c]);
                    if (q < 0.0 && tp.clamp_velocity) {
                        q = 0.0;
                        ++w.clamp_activations;
                    }
                    const double u = vmax * q * df.face_nu_y[fi];
                    flux += (std::max(u, 0.0) * r[cl] + std::min(u, 0.0) * r[c]) * g.dx;
                }
                fys[fi] = flux;
            }
        }
    }

    for (const ExitFace& e : g.exit_faces) {
        for (int s = 0; s < 5; ++s) {
            const double out = f.rho[s][e.cell] * tp.v_out[s] * e.length;
            (e.axis == 0 ? w.fx[s] : w.fy[s])[e.face] = e.outward * out;
            w.exit_outflow_rate += out;
        }
    }
}

double cfl_dt(const Grid2D& g, const TransportParams& tp, double max_adv_speed,
              double max_out_speed, double safety, double dt_max) {
    const double h = std::min(g.dx, g.dy);
    double bound = std::numeric_limits<double>::infinity();
    const double dmax = *std::max_element(tp.d.begin(), tp.d.end());
    if (dmax > 0.0) bound = std::min(bound, h * h / (4.0 * dmax));
    const double speed = max_adv_speed + max_out_speed;
    if (speed > 0.0) bound = std::min(bound, h / speed);
    if (!std::isfinite(bound)) return dt_max;
    return std::min(dt_max, safety * bound);
}

StepStats step(DensityField& f, MassLedger& ledger, double t, double dt, const Grid2D& g,
               const DirectionField& df, const TransportParams& tp,
               const TransitionSchedule& sched, const BehaviorParams& bp, FluxWorkspace& w) {
    assemble_fluxes(f, g, df, tp, w);

    const double gamma = sched.gamma.at(t);
    const double phi = sched.phi.at(t);
    const double area = g.cell_area();
    const double inv_area = 1.0 / area;
    const int nx = g.nx;

    StepStats st;
    st.max_rho_tilde = w.max_rho_tilde;
    st.outflow_rate = w.exit_outflow_rate;
    st.clamp_activations = w.clamp_activations;

    KahanSum mass[5];
    KahanSum mortality;
    KahanSum clip_mass;
    double min_v = std::numeric_limits<double>::infinity();

    double* rho[5];
    const double* fxp[5];
    const double* fyp[5];
    for (int s = 0; s < 5; ++s) {
        rho[s] = f.rho[s].data();
        fxp[s] = w.fx[s].data();
        fyp[s] = w.fy[s].data();
    }

    for (int j = 0; j < g.ny; ++j) {
        const int row = j * nx;
        const int frow = j * (nx + 1);
        for (int i = 0; i < nx; ++i) {
            const int c = row + i;
            if (g.cells[c] != CellKind::Interior) continue;

            const State6 local{rho[0][c], rho[1][c], rho[2][c], rho[3][c], rho[4][c], 0.0};
            const State6 rates = detail::reaction_rates(gamma, phi, local, bp, 1.0);
            mortality.add(rates[kVictims]);

            for (int s = 0; s < 5; ++s) {
                const double div = (fxp[s][frow + i + 1] - fxp[s][frow + i]) +
                                   (fyp[s][c + nx] - fyp[s][c]);
                double nv = local[s] + dt * (rates[s] - inv_area * div);
                if (nv < min_v) min_v = nv;
                if (nv < 0.0) {
                    if (nv <= kAbortBand) {
                        throw SolverError(
                            "solver: rho" + std::to_string(s + 1) + "=" + format_full(nv) +
                            " at cell (" + std::to_string(i) + "," + std::to_string(j) +
                            ") undershoots below -1e-8 at t=" + format_full(t + dt) +
                            "; the step size violates the stability bound");
                    }
                    if (nv > kClipBand) {
                        clip_mass.add(-nv);
                        ++st.clip_count;
                        nv = 0.0;
                    }
                }
                rho[s][c] = nv;
                mass[s].add(nv);
            }
        }
    }

    KahanSum total;
    for (int s = 0; s < 5; ++s) {
        st.species_mass[s] = mass[s].value() * area;
        total.add(st.species_mass[s]);
    }
    st.mass_after = total.value();
    if (!std::isfinite(st.mass_after)) {
        throw_located(f, g, t + dt, "non-finite density,");
    }
    st.min_value = std::isfinite(min_v) ? min_v : 0.0;
    st.mortality_rate = mortality.value() * area;

    ledger.exit_outflow.add(dt * st.outflow_rate);
    ledger.mortality.add(dt * st.mortality_rate);
    ledger.clip_injected.add(clip_mass.value() * area);
    ledger.interior_mass = st.mass_after;

    f.time = t + dt;
    return st;
}

RunResult run_scenario(const ScenarioConfig& cfg) {
    RunResult res;
    res.grid = build_grid(cfg.geometry);
    const Grid2D& g = res.grid;

    double tx = 0, ty = 0;
    g.default_target(cfg.geometry.target_offset, tx, ty);
    DirectionField df = direction_field(g, tx, ty);
    DensityField f = initial_field(cfg, g);

    const std::uint64_t kinetics_clamps0 = negative_input_clamps();
    res.stats.wall_facing_cells = df.wall_facing_cells;
    res.stats.direction_max_divergence = check_divergence(df, g);

    const TransportParams& tp = cfg.transport;
    const double max_out = *std::max_element(tp.v_out.begin(), tp.v_out.end());
    const double max_adv = std::max(tp.v2max, tp.v3max);
    const double dt_nominal =
        cfl_dt(g, tp, max_adv, max_out, cfg.cfl_safety, cfg.dt_max);

    const FieldDiagnostics d0 = diagnostics(f, g);
    res.stats.initial_mass = d0.total_mass;
    res.stats.min_density = d0.min_value;
    res.stats.max_rho_tilde = d0.max_rho_tilde;
    res.stats.max_mass_step_increase = -std::numeric_limits<double>::infinity();
    res.stats.dt = dt_nominal;
    res.ledger.interior_mass = d0.total_mass;

    // Snapshot requests at or before t_end, in order.
    std::vector<double> pending;
    for (double ts : cfg.snapshot_times) {
        if (ts <= cfg.t_end * (1.0 + 1e-12)) pending.push_back(ts);
    }
    std::size_t snap_i = 0;
    auto emit_due = [&](double now, double half_step) {
        while (snap_i < pending.size() && pending[snap_i] <= now + half_step + 1e-15) {
            res.snapshots.push_back({pending[snap_i], now, f});
            ++snap_i;
        }
    };
    auto emit_row = [&](double now) {
        const FieldDiagnostics d = diagnostics(f, g);
        res.series.push_back({now, d.total_mass, d.species_mass, d.min_value, d.max_rho_tilde,
                              res.ledger.exit_outflow_cum(), res.ledger.mortality_cum()});
    };

    emit_row(0.0);
    if (cfg.t_end == 0.0) {
        res.snapshots.push_back({0.0, 0.0, f});
        res.final_field = std::move(f);
        res.stats.max_mass_step_increase = 0.0;
        return res;
    }
    emit_due(0.0, 0.5 * dt_nominal);

    FluxWorkspace w;
    w.resize(g);

    double u_prev = d0.total_mass;
    double next_row = cfg.output_interval;
    double t = 0.0;
    long k = 0;
    double prev_max_rt = d0.max_rho_tilde;

    while (t < cfg.t_end * (1.0 - 1e-15)) {
        double h = dt_nominal;
        if (!tp.clamp_velocity) {
            // Raw linear closure: the speed magnitude grows past the jam
            // density, so the advective bound follows the current state.
            const double vfac = std::max(1.0, prev_max_rt - 1.0);
            h = std::min(h, cfl_dt(g, tp, max_adv * vfac, max_out, cfg.cfl_safety,
                                   cfg.dt_max));
        }
        bool last = false;
        const double remaining = cfg.t_end - t;
        // Absorb float residue: a remainder within a relative hair of h
        // becomes the final (at most marginally longer) step.
        if (h >= remaining - h * 1e-9) {
            h = remaining;
            last = true;
        }

        const StepStats st = step(f, res.ledger, t, h, g, df, tp, cfg.schedule, cfg.behavior, w);
        ++k;
        t = last ? cfg.t_end
                 : (tp.clamp_velocity ? static_cast<double>(k) * dt_nominal : t + h);
        f.time = t;
        prev_max_rt = st.max_rho_tilde;

        res.stats.min_density = std::min(res.stats.min_density, st.min_value);
        res.stats.max_rho_tilde = std::max(res.stats.max_rho_tilde, st.max_rho_tilde);
        res.stats.max_mass_step_increase =
            std::max(res.stats.max_mass_step_increase, st.mass_after - u_prev);
        u_prev = st.mass_after;
        res.stats.clip_count += st.clip_count;
        res.stats.clamp_activations += st.clamp_activations;

        emit_due(t, 0.5 * h);
        if (last || t + 1e-9 * std::max(1.0, cfg.output_interval) >= next_row) {
            emit_row(t);
            while (next_row <= t + 1e-9 * std::max(1.0, cfg.output_interval)) {
                next_row += cfg.output_interval;
            }
        }
    }
    res.stats.steps = static_cast<std::uint64_t>(k);

    // Anything still pending (rounding at t_end) is served by the final state.
    while (snap_i < pending.size()) {
        res.snapshots.push_back({pending[snap_i], t, f});
        ++snap_i;
    }
    const FieldDiagnostics dend = diagnostics(f, g);
    res.stats.max_rho_tilde = std::max(res.stats.max_rho_tilde, dend.max_rho_tilde);
    res.stats.negative_kinetics_clamps = negative_input_clamps() - kinetics_clamps0;
    res.final_field = std::move(f);
    return res;
}

} // namespace apc
