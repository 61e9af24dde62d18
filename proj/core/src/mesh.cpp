#include "nsfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace nsfem {

namespace {

// Edge table + boundary flags from the cell soup. An edge with a single
// adjacent cell is a boundary edge.
void build_connectivity(Mesh& m) {
    std::map<std::pair<int, int>, int> edge_ids;
    m.edges.clear();
    m.cell_edges.assign(m.cells.size(), {-1, -1, -1});

    for (int c = 0; c < m.n_cells(); ++c) {
        for (int k = 0; k < 3; ++k) {
            int a = m.cells[c][(k + 1) % 3];
            int b = m.cells[c][(k + 2) % 3];
            if (a > b) std::swap(a, b);
            auto [it, inserted] = edge_ids.try_emplace({a, b}, m.n_edges());
            if (inserted) {
                m.edges.push_back({a, b, c, -1});
            } else {
                Edge& e = m.edges[it->second];
                if (e.cell1 != -1)
                    throw std::runtime_error("mesh: edge shared by more than two cells");
                e.cell1 = c;
            }
            m.cell_edges[c][k] = it->second;
        }
    }

    m.boundary_edge.assign(m.edges.size(), 0);
    m.boundary_vertex.assign(m.vertices.size(), 0);
    for (int e = 0; e < m.n_edges(); ++e) {
        if (m.edges[e].cell1 == -1) {
            m.boundary_edge[e] = 1;
            m.boundary_vertex[m.edges[e].v0] = 1;
            m.boundary_vertex[m.edges[e].v1] = 1;
        }
    }

    m.h_max = 0.0;
    for (const Edge& e : m.edges)
        m.h_max = std::max(m.h_max, (m.vertices[e.v1] - m.vertices[e.v0]).norm());

    for (int c = 0; c < m.n_cells(); ++c)
        if (m.signed_area(c) <= 0.0)
            throw std::runtime_error("mesh: cell with non-positive signed area");
}

} // namespace

double Mesh::min_angle(int c) const {
    double amin = 4.0;
    for (int k = 0; k < 3; ++k) {
        const Vec2 u = vertices[cells[c][(k + 1) % 3]] - vertices[cells[c][k]];
        const Vec2 v = vertices[cells[c][(k + 2) % 3]] - vertices[cells[c][k]];
        amin = std::min(amin, std::atan2(std::fabs(u.cross(v)), u.dot(v)));
    }
    return amin;
}

double Mesh::total_area() const {
    double a = 0.0;
    for (int c = 0; c < n_cells(); ++c) a += signed_area(c);
    return a;
}

Mesh build_rect_mesh(double xmin, double xmax, double ymin, double ymax, int nx, int ny) {
    if (!(xmax > xmin) || !(ymax > ymin))
        throw std::invalid_argument("build_rect_mesh: degenerate extents");
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_rect_mesh: subdivision counts must be >= 1");

    Mesh m;
    const double dx = (xmax - xmin) / nx;
    const double dy = (ymax - ymin) / ny;

    m.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.vertices.push_back({i == nx ? xmax : xmin + i * dx, j == ny ? ymax : ymin + j * dy});

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    m.cells.reserve(static_cast<size_t>(2) * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j), v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            m.cells.push_back({v00, v10, v11});
            m.cells.push_back({v00, v11, v01});
        }
    }

    build_connectivity(m);
    return m;
}

Mesh refine_uniform(const Mesh& mesh) {
    Mesh fine;
    fine.vertices = mesh.vertices;
    fine.vertices.reserve(mesh.vertices.size() + mesh.edges.size());
    for (const Edge& e : mesh.edges)
        fine.vertices.push_back((mesh.vertices[e.v0] + mesh.vertices[e.v1]) * 0.5);

    const int nv = mesh.n_vertices();
    fine.cells.reserve(static_cast<size_t>(4) * mesh.n_cells());
    fine.parent.reserve(static_cast<size_t>(4) * mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
        const auto& v = mesh.cells[c];
        const int m0 = nv + mesh.cell_edges[c][0];  // midpoint of edge v1-v2
        const int m1 = nv + mesh.cell_edges[c][1];  // midpoint of edge v2-v0
        const int m2 = nv + mesh.cell_edges[c][2];  // midpoint of edge v0-v1
        fine.cells.push_back({v[0], m2, m1});
        fine.cells.push_back({m2, v[1], m0});
        fine.cells.push_back({m1, m0, v[2]});
        fine.cells.push_back({m0, m1, m2});
        for (int k = 0; k < 4; ++k) fine.parent.push_back(c);
    }

    build_connectivity(fine);
    return fine;
}

void Mesh::build_search_grid() const {
    if (!grid_bins_.empty()) return;
    double x0 = vertices[0].x, x1 = x0, y0 = vertices[0].y, y1 = y0;
    for (const Vec2& p : vertices) {
        x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    }
    const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_cells()) / 2.0)));
    grid_nx_ = n; grid_ny_ = n;
    grid_x0_ = x0; grid_y0_ = y0;
    grid_dx_ = (x1 - x0) / n; grid_dy_ = (y1 - y0) / n;
    grid_bins_.assign(static_cast<size_t>(n) * n, {});

    auto clamp_bin = [n](int i) { return std::min(std::max(i, 0), n - 1); };
    for (int c = 0; c < n_cells(); ++c) {
        double cx0 = vertices[cells[c][0]].x, cx1 = cx0, cy0 = vertices[cells[c][0]].y, cy1 = cy0;
        for (int k = 1; k < 3; ++k) {
            const Vec2& p = vertices[cells[c][k]];
            cx0 = std::min(cx0, p.x); cx1 = std::max(cx1, p.x);
            cy0 = std::min(cy0, p.y); cy1 = std::max(cy1, p.y);
        }
        const int i0 = clamp_bin(static_cast<int>((cx0 - grid_x0_) / grid_dx_));
        const int i1 = clamp_bin(static_cast<int>((cx1 - grid_x0_) / grid_dx_));
        const int j0 = clamp_bin(static_cast<int>((cy0 - grid_y0_) / grid_dy_));
        const int j1 = clamp_bin(static_cast<int>((cy1 - grid_y0_) / grid_dy_));
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i)
                grid_bins_[static_cast<size_t>(j) * grid_nx_ + i].push_back(c);
    }
}

PointLocation locate_point(const Mesh& mesh, const Vec2& p) {
    mesh.build_search_grid();
    const double tol = 1e-12 * mesh.h_max;

    auto try_cell = [&](int c) -> PointLocation {
        Bary b = mesh.barycentric(c, p);
        // Tolerance is measured in physical distance: scale by cell size.
        const double scale = std::sqrt(std::fabs(mesh.signed_area(c)));
        const double btol = tol / std::max(scale, 1e-300);
        if (b[0] >= -btol && b[1] >= -btol && b[2] >= -btol) {
            for (double& v : b) v = std::max(v, 0.0);
            const double s = b[0] + b[1] + b[2];
            for (double& v : b) v /= s;
            return {c, b};
        }
        return {-1, {}};
    };

    const int i = std::min(std::max(static_cast<int>((p.x - mesh.grid_x0_) / mesh.grid_dx_), 0), mesh.grid_nx_ - 1);
    const int j = std::min(std::max(static_cast<int>((p.y - mesh.grid_y0_) / mesh.grid_dy_), 0), mesh.grid_ny_ - 1);

    // Search the point's bin first, then its neighbors (covers points on bin borders).
    for (int dj = 0; dj <= 2; ++dj) {
        for (int di = 0; di <= 2; ++di) {
            const int bi = i + (di == 0 ? 0 : (di == 1 ? -1 : 1));
            const int bj = j + (dj == 0 ? 0 : (dj == 1 ? -1 : 1));
            if (bi < 0 || bj < 0 || bi >= mesh.grid_nx_ || bj >= mesh.grid_ny_) continue;
            for (int c : mesh.grid_bins_[static_cast<size_t>(bj) * mesh.grid_nx_ + bi]) {
                const PointLocation loc = try_cell(c);
                if (loc.cell >= 0) return loc;
            }
        }
    }
    throw std::domain_error("locate_point: point outside mesh");
}

} // namespace nsfem
