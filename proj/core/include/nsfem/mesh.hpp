#pragma once

// Conforming triangulations of axis-aligned rectangles: structured generation,
// nested uniform refinement, point location. Meshes are immutable once built.

#include "nsfem/geometry.hpp"

#include <array>
#include <vector>

namespace nsfem {

struct Edge {
    int v0 = -1;     // v0 < v1 (global vertex ids, ascending)
    int v1 = -1;
    int cell0 = -1;
    int cell1 = -1;  // -1 on the boundary
};

struct PointLocation {
    int cell = -1;
    Bary bary{};
};

class Mesh {
public:
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> cells;       // counterclockwise vertex triples
    std::vector<Edge> edges;
    std::vector<std::array<int, 3>> cell_edges;  // edge k is opposite local vertex k
    std::vector<char> boundary_vertex;
    std::vector<char> boundary_edge;
    std::vector<int> parent;                     // parent cell in the refined-from mesh; empty for generated meshes
    double h_max = 0.0;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }

    double signed_area(int c) const {
        const Vec2& p0 = vertices[cells[c][0]];
        const Vec2& p1 = vertices[cells[c][1]];
        const Vec2& p2 = vertices[cells[c][2]];
        return 0.5 * (p1 - p0).cross(p2 - p0);
    }

    // Columns of the affine map x = p0 + B * (lambda1, lambda2).
    Mat2 jacobian(int c) const {
        const Vec2& p0 = vertices[cells[c][0]];
        return Mat2::from_columns(vertices[cells[c][1]] - p0, vertices[cells[c][2]] - p0);
    }

    Vec2 point(int c, const Bary& b) const {
        const Vec2& p0 = vertices[cells[c][0]];
        const Vec2& p1 = vertices[cells[c][1]];
        const Vec2& p2 = vertices[cells[c][2]];
        return p0 * b[0] + p1 * b[1] + p2 * b[2];
    }

    Bary barycentric(int c, const Vec2& p) const {
        const Vec2 rel = p - vertices[cells[c][0]];
        const Vec2 l = jacobian(c).inverse().apply(rel);
        return {1.0 - l.x - l.y, l.x, l.y};
    }

    Vec2 centroid(int c) const { return point(c, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}); }

    double min_angle(int c) const;
    double total_area() const;

    // Cell lookup grid, built lazily by locate_point.
    void build_search_grid() const;

private:
    friend PointLocation locate_point(const Mesh&, const Vec2&);
    mutable std::vector<std::vector<int>> grid_bins_;
    mutable int grid_nx_ = 0, grid_ny_ = 0;
    mutable double grid_x0_ = 0, grid_y0_ = 0, grid_dx_ = 0, grid_dy_ = 0;
};

// Structured diagonal split of an nx-by-ny rectangle grid into 2*nx*ny triangles.
// If ymin < 0 < ymax and ny is even, y = 0 is a mesh line.
Mesh build_rect_mesh(double xmin, double xmax, double ymin, double ymax, int nx, int ny);

// Splits every cell into 4 congruent children by edge midpoints; the result is
// nested in the input and h_max halves exactly.
Mesh refine_uniform(const Mesh& mesh);

// Finds a cell containing p (tolerance 1e-12 * h_max on cell boundaries).
// Throws std::domain_error if p lies outside the mesh.
PointLocation locate_point(const Mesh& mesh, const Vec2& p);

} // namespace nsfem
