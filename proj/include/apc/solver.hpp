#pragma once

#include <cstdint>
#include <vector>

#include "apc/field.hpp"
#include "apc/grid.hpp"
#include "apc/kinetics.hpp"
#include "apc/scenario.hpp"

namespace apc {

// Per-face flux buffers plus scratch, allocated once per run. Fluxes are
// integrated over the face (per unit time), positive in the +axis
// direction; fx is indexed like Grid2D::xface, fy like Grid2D::yface.
struct FluxWorkspace {
    std::array<std::vector<double>, 5> fx, fy;
    std::vector<double> rho_tilde;
    double exit_outflow_rate = 0.0;   // total exit flux of the assembled state
    double max_rho_tilde = 0.0;       // of the assembled state
    std::uint64_t clamp_activations = 0; // face-species updates with the speed floored

    void resize(const Grid2D& g);
};

// Two-point diffusive flux on open faces, first-order upwind advection for
// panic and control (face speed from the averaged direction field and the
// averaged total density), zero total flux through walls, and the outgoing
// flux rho_cell * v_out on exit faces.
void assemble_fluxes(const DensityField& f, const Grid2D& g, const DirectionField& df,
                     const TransportParams& tp, FluxWorkspace& w);

// Largest stable explicit step: safety * min(h^2/(4 max d), h/(max
// advective + boundary speed)), h = min(dx,dy), capped at dt_max.
// Unconstrained (all coefficients zero) returns dt_max.
double cfl_dt(const Grid2D& g, const TransportParams& tp, double max_adv_speed,
              double max_out_speed, double safety, double dt_max);

struct StepStats {
    double mass_after = 0.0;
    std::array<double, 5> species_mass{};
    double min_value = 0.0;      // smallest updated value before clipping
    double max_rho_tilde = 0.0;  // of the pre-step state
    double outflow_rate = 0.0;
    double mortality_rate = 0.0;
    std::uint64_t clip_count = 0;
    std::uint64_t clamp_activations = 0;
};

// One forward-Euler update: rho += dt * (-div(flux)/area + reaction). The
// ledger receives exactly the exit fluxes and mortality sinks applied to
// the cells, so interior mass + outflow + mortality telescopes. Values in
// (-1e-12, 0) are clipped to zero (counted); anything at or below -1e-8
// aborts with SolverError, as does a non-finite value.
StepStats step(DensityField& f, MassLedger& ledger, double t, double dt, const Grid2D& g,
               const DirectionField& df, const TransportParams& tp,
               const TransitionSchedule& sched, const BehaviorParams& bp, FluxWorkspace& w);

struct Snapshot {
    double requested_time = 0.0;
    double time = 0.0; // nearest completed step
    DensityField field;
};

struct TimeseriesRow {
    double t = 0.0;
    double total_mass = 0.0;
    std::array<double, 5> species_mass{};
    double min_value = 0.0;
    double max_rho_tilde = 0.0;
    double outflow_cum = 0.0;
    double mortality_cum = 0.0;
};

struct RunStats {
    double dt = 0.0;
    std::uint64_t steps = 0;
    double initial_mass = 0.0;
    double min_density = 0.0;          // over all species, cells and steps
    double max_rho_tilde = 0.0;        // over all cells and steps
    double max_mass_step_increase = 0.0; // largest U(t+dt)-U(t); <= 0 when monotone
    std::uint64_t clip_count = 0;
    std::uint64_t clamp_activations = 0;
    std::uint64_t negative_kinetics_clamps = 0;
    int wall_facing_cells = 0;
    double direction_max_divergence = 0.0;
};

struct RunResult {
    Grid2D grid;
    std::vector<Snapshot> snapshots;
    std::vector<TimeseriesRow> series;
    MassLedger ledger;
    DensityField final_field;
    RunStats stats;
};

// Full scenario run from t=0 to t_end: builds the grid, direction field
// and initial condition, picks dt from the CFL bound, marches, and emits
// snapshots at the nearest completed step of each requested time plus one
// time-series row per output interval. With clamped velocities dt is fixed
// for the whole run; without the clamp the advective bound is re-evaluated
// every step from the current density.
RunResult run_scenario(const ScenarioConfig& cfg);

} // namespace apc
