#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apc/field.hpp"
#include "apc/solver.hpp"

namespace apc {

// One CSV matrix per species (ny rows by nx columns, row 0 at the top of
// the domain, %.17g values) plus a JSON sidecar with the capture time,
// grid geometry and the configuration hash. Files are named
// <dir>/snap_<label>_rho{1..5}.csv and <dir>/snap_<label>.json.
void write_snapshot(const DensityField& f, const Grid2D& g, double requested_time,
                    const std::string& dir, const std::string& label,
                    std::uint64_t params_hash);

// Reads one species matrix back; throws on shape or parse problems.
std::vector<double> read_snapshot_csv(const std::string& path, int& nx, int& ny);

// t,U,U1..U5,minval,max_rhotilde,outflow_cum,mortality_cum
void write_timeseries(const std::vector<TimeseriesRow>& rows, const std::string& path);

// Grayscale binary PGM, linear [0, max] -> [white, black]; the scale max
// is recorded in a header comment. Identical fields give identical bytes.
void render_heatmap(const DensityField& f, int species, const Grid2D& g,
                    const std::string& path);

} // namespace apc
