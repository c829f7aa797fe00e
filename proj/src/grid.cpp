#include "apc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace apc {

std::string side_name(Side s) {
    switch (s) {
        case Side::None: return "none";
        case Side::Left: return "left";
        case Side::Right: return "right";
        case Side::Top: return "top";
        case Side::Bottom: return "bottom";
    }
    return "none";
}

Side side_from_name(const std::string& name) {
    if (name == "none") return Side::None;
    if (name == "left") return Side::Left;
    if (name == "right") return Side::Right;
    if (name == "top") return Side::Top;
    if (name == "bottom") return Side::Bottom;
    throw ConfigError("unknown side '" + name + "' (expected none|left|right|top|bottom)");
}

void GeometrySpec::validate() const {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw ConfigError("geometry.width and geometry.height must be > 0");
    }
    if (nx < 3 || ny < 3) {
        throw ConfigError("geometry.nx and geometry.ny must be >= 3 (got " +
                          std::to_string(nx) + "x" + std::to_string(ny) + ")");
    }
    if (exit_side != Side::None) {
        if (!(exit_from < exit_to)) {
            throw ConfigError("geometry.exit_from must be < geometry.exit_to");
        }
        const bool horizontal = (exit_side == Side::Top || exit_side == Side::Bottom);
        const double lo = horizontal ? origin_x : origin_y;
        const double hi = horizontal ? origin_x + width : origin_y + height;
        if (exit_from < lo - 1e-12 || exit_to > hi + 1e-12) {
            throw ConfigError("geometry exit interval lies outside the domain side");
        }
        if (!(target_offset > 0.0)) {
            throw ConfigError("geometry.target_offset must be > 0");
        }
    }
    for (const Obstacle& o : obstacles) {
        if (!(o.x0 < o.x1) || !(o.y0 < o.y1)) {
            throw ConfigError("obstacle rectangle must satisfy x0 < x1 and y0 < y1");
        }
        if (o.x1 <= origin_x || o.x0 >= origin_x + width || o.y1 <= origin_y ||
            o.y0 >= origin_y + height) {
            throw ConfigError("obstacle rectangle lies entirely outside the domain");
        }
    }
}

void Grid2D::default_target(double offset, double& tx, double& ty) const {
    const double mid = 0.5 * (exit_from + exit_to);
    switch (exit_side) {
        case Side::Right:
            tx = origin_x + width() + offset;
            ty = mid;
            break;
        case Side::Left:
            tx = origin_x - offset;
            ty = mid;
            break;
        case Side::Top:
            tx = mid;
            ty = origin_y + height() + offset;
            break;
        case Side::Bottom:
            tx = mid;
            ty = origin_y - offset;
            break;
        case Side::None:
            // Sealed domain: park the target beyond the right wall so a
            // direction field still exists for zero-advection runs.
            tx = origin_x + width() + offset;
            ty = origin_y + 0.5 * height();
            break;
    }
}

double Grid2D::distance_to_exit(double x, double y) const {
    if (exit_side == Side::None) return std::numeric_limits<double>::infinity();
    double ax, ay, bx, by;
    switch (exit_side) {
        case Side::Right:
            ax = bx = origin_x + width();
            ay = exit_from;
            by = exit_to;
            break;
        case Side::Left:
            ax = bx = origin_x;
            ay = exit_from;
            by = exit_to;
            break;
        case Side::Top:
            ay = by = origin_y + height();
            ax = exit_from;
            bx = exit_to;
            break;
        default:
            ay = by = origin_y;
            ax = exit_from;
            bx = exit_to;
            break;
    }
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double t = ((x - ax) * vx + (y - ay) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double px = ax + t * vx, py = ay + t * vy;
    return std::hypot(x - px, y - py);
}

namespace {

bool in_rect(double x, double y, const Obstacle& o) {
    return x >= o.x0 && x <= o.x1 && y >= o.y0 && y <= o.y1;
}

void classify_side(const Grid2D& g, Side side, const GeometrySpec& spec,
                   std::vector<FaceKind>& faces) {
    const int n = (side == Side::Left || side == Side::Right) ? g.ny : g.nx;
    faces.assign(n, FaceKind::Wall);
    if (spec.exit_side != side) return;
    for (int k = 0; k < n; ++k) {
        const double c = (side == Side::Left || side == Side::Right) ? g.cy(k) : g.cx(k);
        if (c >= spec.exit_from && c <= spec.exit_to) faces[k] = FaceKind::Exit;
    }
}

} // namespace

Grid2D build_grid(const GeometrySpec& spec) {
    spec.validate();

    Grid2D g;
    g.nx = spec.nx;
    g.ny = spec.ny;
    g.dx = spec.width / spec.nx;
    g.dy = spec.height / spec.ny;
    g.origin_x = spec.origin_x;
    g.origin_y = spec.origin_y;
    g.exit_side = spec.exit_side;
    g.exit_from = spec.exit_from;
    g.exit_to = spec.exit_to;

    // Obstacles are rasterized to whole cells by cell-center containment.
    g.cells.assign(static_cast<std::size_t>(g.nx) * g.ny, CellKind::Interior);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            for (const Obstacle& o : spec.obstacles) {
                if (in_rect(g.cx(i), g.cy(j), o)) {
                    g.cells[g.idx(i, j)] = CellKind::Obstacle;
                    break;
                }
            }
        }
    }
    g.n_interior = static_cast<int>(
        std::count(g.cells.begin(), g.cells.end(), CellKind::Interior));
    if (g.n_interior == 0) {
        throw ConfigError("grid has no interior cells (obstacles cover the whole domain)");
    }

    classify_side(g, Side::Left, spec, g.left);
    classify_side(g, Side::Right, spec, g.right);
    classify_side(g, Side::Bottom, spec, g.bottom);
    classify_side(g, Side::Top, spec, g.top);

    // Open faces carry diffusive/advective flux: strictly between two
    // interior cells. The outer boundary and obstacle faces stay closed.
    g.open_x.assign(static_cast<std::size_t>(g.nx + 1) * g.ny, 0);
    g.open_y.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            if (g.interior(i - 1, j) && g.interior(i, j)) g.open_x[g.xface(i, j)] = 1;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (g.interior(i, j - 1) && g.interior(i, j)) g.open_y[g.yface(i, j)] = 1;
        }
    }

    // Exit faces, in order along the side (contiguity is checked below).
    auto add_exit = [&](int i, int j, int face, int axis, double outward, double len) {
        if (!g.interior(i, j)) {
            throw ConfigError("exit segment overlaps an obstacle cell at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
        }
        g.exit_faces.push_back({g.idx(i, j), face, axis, outward, len});
    };
    std::vector<int> exit_slots;
    if (spec.exit_side == Side::Left || spec.exit_side == Side::Right) {
        const int i = (spec.exit_side == Side::Left) ? 0 : g.nx - 1;
        const int fi = (spec.exit_side == Side::Left) ? 0 : g.nx;
        const double outward = (spec.exit_side == Side::Left) ? -1.0 : 1.0;
        const auto& faces = (spec.exit_side == Side::Left) ? g.left : g.right;
        for (int j = 0; j < g.ny; ++j) {
            if (faces[j] == FaceKind::Exit) {
                add_exit(i, j, g.xface(fi, j), 0, outward, g.dy);
                exit_slots.push_back(j);
            }
        }
    } else if (spec.exit_side == Side::Bottom || spec.exit_side == Side::Top) {
        const int j = (spec.exit_side == Side::Bottom) ? 0 : g.ny - 1;
        const int fj = (spec.exit_side == Side::Bottom) ? 0 : g.ny;
        const double outward = (spec.exit_side == Side::Bottom) ? -1.0 : 1.0;
        const auto& faces = (spec.exit_side == Side::Bottom) ? g.bottom : g.top;
        for (int i = 0; i < g.nx; ++i) {
            if (faces[i] == FaceKind::Exit) {
                add_exit(i, j, g.yface(i, fj), 1, outward, g.dx);
                exit_slots.push_back(i);
            }
        }
    }
    if (spec.exit_side != Side::None) {
        if (g.exit_faces.empty()) {
            throw ConfigError("exit interval does not cover any boundary face; widen it or "
                              "refine the grid");
        }
        for (std::size_t k = 1; k < exit_slots.size(); ++k) {
            if (exit_slots[k] != exit_slots[k - 1] + 1) {
                throw ConfigError("exit faces must form one contiguous boundary segment");
            }
        }
    }
    return g;
}

DirectionField direction_field(const Grid2D& g, double target_x, double target_y) {
    if (target_x >= g.origin_x && target_x <= g.origin_x + g.width() &&
        target_y >= g.origin_y && target_y <= g.origin_y + g.height()) {
        throw ConfigError("direction target must lie strictly outside the closed domain");
    }

    DirectionField df;
    df.target_x = target_x;
    df.target_y = target_y;
    const std::size_t n = g.cells.size();
    df.nu_x.assign(n, 0.0);
    df.nu_y.assign(n, 0.0);

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.interior(i, j)) continue;
            const double ex = target_x - g.cx(i);
            const double ey = target_y - g.cy(j);
            const double r = std::hypot(ex, ey);
            df.nu_x[g.idx(i, j)] = ex / r;
            df.nu_y[g.idx(i, j)] = ey / r;
        }
    }

    // Face-normal components: arithmetic average of the two adjacent cell
    // values on open faces, zero on walls, +-1 (outward) on exit faces.
    df.face_nu_x.assign(g.open_x.size(), 0.0);
    df.face_nu_y.assign(g.open_y.size(), 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const int f = g.xface(i, j);
            if (g.open_x[f]) {
                df.face_nu_x[f] = 0.5 * (df.nu_x[g.idx(i - 1, j)] + df.nu_x[g.idx(i, j)]);
            }
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int f = g.yface(i, j);
            if (g.open_y[f]) {
                df.face_nu_y[f] = 0.5 * (df.nu_y[g.idx(i, j - 1)] + df.nu_y[g.idx(i, j)]);
            }
        }
    }
    for (const ExitFace& e : g.exit_faces) {
        if (e.axis == 0) {
            df.face_nu_x[e.face] = e.outward;
        } else {
            df.face_nu_y[e.face] = e.outward;
        }
    }

    // Cells whose desired direction points into a wall face: the radial
    // field ignores obstacles, so these are worth reporting.
    auto wall_face = [&](int i, int j, int di, int dj) {
        const int ni = i + di, nj = j + dj;
        if (ni < 0 || ni >= g.nx || nj < 0 || nj >= g.ny) {
            const std::vector<FaceKind>* faces = nullptr;
            int k = 0;
            if (di == -1) { faces = &g.left; k = j; }
            else if (di == 1) { faces = &g.right; k = j; }
            else if (dj == -1) { faces = &g.bottom; k = i; }
            else { faces = &g.top; k = i; }
            return (*faces)[k] == FaceKind::Wall;
        }
        return !g.interior(ni, nj);
    };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (!g.interior(i, j)) continue;
            const double ux = df.nu_x[g.idx(i, j)];
            const double uy = df.nu_y[g.idx(i, j)];
            const bool blocked = (ux < 0 && wall_face(i, j, -1, 0)) ||
                                 (ux > 0 && wall_face(i, j, 1, 0)) ||
                                 (uy < 0 && wall_face(i, j, 0, -1)) ||
                                 (uy > 0 && wall_face(i, j, 0, 1));
            if (blocked) ++df.wall_facing_cells;
        }
    }
    return df;
}

double check_divergence(const DirectionField& df, const Grid2D& g) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < g.ny - 1; ++j) {
        for (int i = 1; i < g.nx - 1; ++i) {
            if (!g.interior(i, j) || !g.interior(i - 1, j) || !g.interior(i + 1, j) ||
                !g.interior(i, j - 1) || !g.interior(i, j + 1)) {
                continue;
            }
            const double div =
                (df.nu_x[g.idx(i + 1, j)] - df.nu_x[g.idx(i - 1, j)]) / (2.0 * g.dx) +
                (df.nu_y[g.idx(i, j + 1)] - df.nu_y[g.idx(i, j - 1)]) / (2.0 * g.dy);
            worst = std::max(worst, div);
        }
    }
    return worst;
}

} // namespace apc
