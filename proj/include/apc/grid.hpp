#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "apc/errors.hpp"

namespace apc {

enum class Side { None, Left, Right, Top, Bottom };

std::string side_name(Side s);
Side side_from_name(const std::string& name);

// Axis-aligned obstacle rectangle, (x0,y0) lower-left to (x1,y1) upper-right.
struct Obstacle {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct GeometrySpec {
    double width = 2.0;
    double height = 1.0;
    int nx = 100;
    int ny = 50;
    double origin_x = 0.0;
    double origin_y = 0.0;
    Side exit_side = Side::Right;
    double exit_from = 0.3; // interval along the exit side, in domain coordinates
    double exit_to = 0.7;
    double target_offset = 0.25; // attraction point distance beyond the exit midpoint
    std::vector<Obstacle> obstacles;

    void validate() const;

    friend bool operator==(const GeometrySpec&, const GeometrySpec&) = default;
};

enum class CellKind : std::uint8_t { Interior = 0, Obstacle = 1 };
enum class FaceKind : std::uint8_t { Wall = 0, Exit = 1 };

// An outer-boundary exit face, with enough precomputed indexing for the
// flux assembly to write the outgoing flux directly.
struct ExitFace {
    int cell;         // owning interior cell
    int face;         // index into the fx or fy face array
    int axis;         // 0 = x-face, 1 = y-face
    double outward;   // +1 if outward normal points in +axis direction, else -1
    double length;    // face length
};

// Uniform cell-centered grid over a rectangle. Cells are either part of the
// computational set (interior) or masked out (obstacle). Every outer
// boundary face is exactly one of wall or exit; faces touching obstacle
// cells behave as walls.
struct Grid2D {
    int nx = 0, ny = 0;
    double dx = 0, dy = 0;
    double origin_x = 0, origin_y = 0;
    Side exit_side = Side::None;
    double exit_from = 0, exit_to = 0;

    std::vector<CellKind> cells;    // nx*ny
    std::vector<FaceKind> left;     // ny outer faces at i=0
    std::vector<FaceKind> right;    // ny outer faces at i=nx-1
    std::vector<FaceKind> bottom;   // nx outer faces at j=0
    std::vector<FaceKind> top;      // nx outer faces at j=ny-1

    // 1 where diffusive/advective flux crosses the face (both cells
    // interior), 0 on walls, obstacle faces and the whole outer boundary.
    std::vector<std::uint8_t> open_x; // (nx+1)*ny
    std::vector<std::uint8_t> open_y; // nx*(ny+1)
    std::vector<ExitFace> exit_faces;
    int n_interior = 0;

    int idx(int i, int j) const { return j * nx + i; }
    int xface(int i, int j) const { return j * (nx + 1) + i; } // between (i-1,j) and (i,j)
    int yface(int i, int j) const { return j * nx + i; }       // between (i,j-1) and (i,j)
    double cx(int i) const { return origin_x + (i + 0.5) * dx; }
    double cy(int j) const { return origin_y + (j + 0.5) * dy; }
    double width() const { return nx * dx; }
    double height() const { return ny * dy; }
    double cell_area() const { return dx * dy; }
    bool interior(int i, int j) const { return cells[idx(i, j)] == CellKind::Interior; }

    // Midpoint of the exit segment, pushed `offset` beyond the boundary.
    // Used as the default attraction target.
    void default_target(double offset, double& tx, double& ty) const;

    // Distance from a point to the exit segment (infinity when no exit).
    double distance_to_exit(double x, double y) const;
};

Grid2D build_grid(const GeometrySpec& spec);

// Unit vectors pointing from each cell center toward an exterior target.
// Zero on obstacle cells and wall faces; aligned with the outward normal
// on exit faces.
struct DirectionField {
    double target_x = 0, target_y = 0;
    std::vector<double> nu_x, nu_y;         // per cell
    std::vector<double> face_nu_x;          // normal component at x-faces (averaged, 0 if closed)
    std::vector<double> face_nu_y;          // normal component at y-faces
    int wall_facing_cells = 0;              // interior cells whose nu points into a wall face
};

DirectionField direction_field(const Grid2D& g, double target_x, double target_y);

// Max central-difference divergence over interior cells whose four
// neighbors are interior. The radial field toward an exterior point has
// continuum divergence -1/r, so anything noticeably positive flags a bad
// direction field.
double check_divergence(const DirectionField& df, const Grid2D& g);

} // namespace apc
