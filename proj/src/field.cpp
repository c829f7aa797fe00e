#include "apc/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace apc {

void TransportParams::validate() const {
    for (int i = 0; i < 5; ++i) {
        if (!(d[i] >= 0.0)) {
            throw ConfigError("transport.d" + std::to_string(i + 1) + " must be >= 0");
        }
        if (!(v_out[i] >= 0.0)) {
            throw ConfigError("transport.v" + std::to_string(i + 1) + "out must be >= 0");
        }
    }
    if (!(v2max >= 0.0) || !(v3max >= 0.0)) {
        throw ConfigError("transport.v2max and transport.v3max must be >= 0");
    }
}

std::pair<double, double> velocity_closure(const Rho5& rho, const TransportParams& tp) {
    const double rho_tilde = ((rho[0] + rho[1]) + (rho[2] + rho[3])) + rho[4];
    double factor = 1.0 - rho_tilde;
    if (tp.clamp_velocity) factor = std::max(0.0, factor);
    return {tp.v2max * factor, tp.v3max * factor};
}

FieldDiagnostics diagnostics(const DensityField& f, const Grid2D& g) {
    FieldDiagnostics out;
    out.min_value = std::numeric_limits<double>::infinity();
    out.max_value = -std::numeric_limits<double>::infinity();
    const double area = g.cell_area();
    KahanSum total;
    for (int s = 0; s < 5; ++s) {
        KahanSum mass;
        const auto& r = f.rho[s];
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (g.cells[c] != CellKind::Interior) continue;
            mass.add(r[c]);
            out.min_value = std::min(out.min_value, r[c]);
            out.max_value = std::max(out.max_value, r[c]);
        }
        out.species_mass[s] = mass.value() * area;
        total.add(out.species_mass[s]);
    }
    out.total_mass = total.value();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.interior(i, j)) continue;
            const int c = g.idx(i, j);
            double rt = 0.0;
            for (int s = 0; s < 5; ++s) rt += f.rho[s][c];
            out.max_rho_tilde = std::max(out.max_rho_tilde, rt);
        }
    }
    if (!std::isfinite(out.min_value)) out.min_value = out.max_value = 0.0;
    return out;
}

double exit_region_peak(const DensityField& f, const Grid2D& g, int species, double radius) {
    if (g.exit_side == Side::None) return 0.0;
    if (radius <= 0.0) radius = 0.25 * std::min(g.width(), g.height());
    double peak = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.interior(i, j)) continue;
            if (g.distance_to_exit(g.cx(i), g.cy(j)) > radius) continue;
            peak = std::max(peak, f.rho[species][g.idx(i, j)]);
        }
    }
    return peak;
}

} // namespace apc
