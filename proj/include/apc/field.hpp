#pragma once

#include <array>
#include <utility>
#include <vector>

#include "apc/grid.hpp"
#include "apc/kinetics.hpp"
#include "apc/numeric.hpp"

namespace apc {

// Transport coefficients of the five species. Only panic and control
// advect; everyone may diffuse and leave through the exit.
struct TransportParams {
    std::array<double, 5> d{0.001, 0.05, 0.01, 0.01, 0.01}; // diffusivities
    double v2max = 0.3; // free advection speed, panic
    double v3max = 0.2; // free advection speed, control
    std::array<double, 5> v_out{0.2, 0.1, 0.3, 0.2, 0.2}; // exit boundary speeds
    // When set, speeds are floored at zero once the total density passes
    // the jam value 1; otherwise the raw linear closure is used and may
    // reverse the motion.
    bool clamp_velocity = true;

    void validate() const;

    friend bool operator==(const TransportParams&, const TransportParams&) = default;
};

// Speed-density closure V_i = V_{i,max} (1 - rho_tilde) for panic and
// control, floored at zero unless tp.clamp_velocity is off.
std::pair<double, double> velocity_closure(const Rho5& rho, const TransportParams& tp);

// The five spatial densities on a grid, species-major. Obstacle cells hold
// zeros and stay zero.
struct DensityField {
    int nx = 0, ny = 0;
    double time = 0.0;
    std::array<std::vector<double>, 5> rho;

    void resize(int nx_, int ny_) {
        nx = nx_;
        ny = ny_;
        for (auto& r : rho) r.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    }
};

// Discrete L1 accounting: whatever left the interior went out through the
// exit or died. interior_mass + exit_outflow_cum + mortality_cum stays at
// the initial mass up to round-off.
struct MassLedger {
    double interior_mass = 0.0;
    KahanSum exit_outflow;   // time-integrated exit-face flux, all species
    KahanSum mortality;      // time-integrated mortality sink
    KahanSum clip_injected;  // mass created by clipping tiny negative undershoots

    double exit_outflow_cum() const { return exit_outflow.value(); }
    double mortality_cum() const { return mortality.value(); }
    double closure_residual(double initial_mass) const {
        return interior_mass + exit_outflow_cum() + mortality_cum() - initial_mass;
    }
};

struct FieldDiagnostics {
    double total_mass = 0.0;               // U = sum of all species masses
    std::array<double, 5> species_mass{};  // U_i
    double min_value = 0.0;
    double max_value = 0.0;
    double max_rho_tilde = 0.0;
};

// Cell-area-weighted sums over interior cells (compensated).
FieldDiagnostics diagnostics(const DensityField& f, const Grid2D& g);

// Largest value of one species over interior cells whose center lies
// within `radius` of the exit segment. radius <= 0 picks a quarter of the
// shorter domain side. Returns 0 when there is no exit.
double exit_region_peak(const DensityField& f, const Grid2D& g, int species,
                        double radius = 0.0);

} // namespace apc
