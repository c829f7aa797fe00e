#include "apc/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apc/numeric.hpp"

namespace apc {

namespace {

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace

void write_snapshot(const DensityField& f, const Grid2D& g, double requested_time,
                    const std::string& dir, const std::string& label,
                    std::uint64_t params_hash) {
    std::filesystem::create_directories(dir);
    for (int s = 0; s < 5; ++s) {
        const std::string path = dir + "/snap_" + label + "_rho" + std::to_string(s + 1) + ".csv";
        auto out = open_out(path);
        for (int j = g.ny - 1; j >= 0; --j) {
            for (int i = 0; i < g.nx; ++i) {
                if (i) out << ',';
                out << format_full(f.rho[s][g.idx(i, j)]);
            }
            out << '\n';
        }
        finish(out, path);
    }
    nlohmann::json meta;
    meta["time"] = f.time;
    meta["requested_time"] = requested_time;
    meta["nx"] = g.nx;
    meta["ny"] = g.ny;
    meta["dx"] = g.dx;
    meta["dy"] = g.dy;
    meta["origin_x"] = g.origin_x;
    meta["origin_y"] = g.origin_y;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(params_hash));
    meta["params_hash"] = hash;
    const std::string path = dir + "/snap_" + label + ".json";
    auto out = open_out(path);
    out << meta.dump(2) << '\n';
    finish(out, path);
}

std::vector<double> read_snapshot_csv(const std::string& path, int& nx, int& ny) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) row.push_back(std::stod(item));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::runtime_error("ragged snapshot matrix in '" + path + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty snapshot '" + path + "'");
    ny = static_cast<int>(rows.size());
    nx = static_cast<int>(rows.front().size());
    std::vector<double> values(static_cast<std::size_t>(nx) * ny);
    // Row 0 of the file is the top of the domain (j = ny-1).
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            values[static_cast<std::size_t>(j) * nx + i] = rows[ny - 1 - j][i];
        }
    }
    return values;
}

void write_timeseries(const std::vector<TimeseriesRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "t,U,U1,U2,U3,U4,U5,minval,max_rhotilde,outflow_cum,mortality_cum\n";
    for (const TimeseriesRow& r : rows) {
        out << format_full(r.t) << ',' << format_full(r.total_mass);
        for (double m : r.species_mass) out << ',' << format_full(m);
        out << ',' << format_full(r.min_value) << ',' << format_full(r.max_rho_tilde) << ','
            << format_full(r.outflow_cum) << ',' << format_full(r.mortality_cum) << '\n';
    }
    finish(out, path);
}

void render_heatmap(const DensityField& f, int species, const Grid2D& g,
                    const std::string& path) {
    const auto& r = f.rho[species];
    double mx = 0.0;
    for (double v : r) mx = std::max(mx, v);

    auto out = open_out(path, true);
    out << "P5\n# max " << format_full(mx) << "\n" << g.nx << ' ' << g.ny << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(g.nx));
    for (int j = g.ny - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx; ++i) {
            double shade = 255.0;
            if (mx > 0.0) {
                const double v = std::clamp(r[g.idx(i, j)], 0.0, mx);
                shade = 255.0 - std::round(255.0 * v / mx);
            }
            row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(shade);
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    finish(out, path);
}

} // namespace apc
