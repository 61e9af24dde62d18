#include "nsfem/vtk_io.hpp"

#include "nsfem/assembly.hpp"
#include "nsfem/linear_solver.hpp"
#include "nsfem/quadrature.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace nsfem {

namespace {

void write_header(const Mesh& mesh, std::ostream& os, const std::string& title) {
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << std::setprecision(17);
    os << "POINTS " << mesh.n_vertices() << " double\n";
    for (const Vec2& p : mesh.vertices) os << p.x << ' ' << p.y << " 0\n";
    os << "CELLS " << mesh.n_cells() << ' ' << 4 * mesh.n_cells() << '\n';
    for (const auto& c : mesh.cells) os << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
    os << "CELL_TYPES " << mesh.n_cells() << '\n';
    for (int c = 0; c < mesh.n_cells(); ++c) os << "5\n";
}

} // namespace

void write_mesh_vtk(const Mesh& mesh, std::ostream& os, const std::string& title) {
    write_header(mesh, os, title);
}

Field recover_vorticity(const Field& velocity, std::shared_ptr<const FESpace> p1space) {
    if (velocity.space->kind != SpaceKind::P2Vector || p1space->kind != SpaceKind::P1)
        throw std::invalid_argument("recover_vorticity: needs P2Vector velocity and P1 target");
    if (velocity.space->mesh.get() != p1space->mesh.get())
        throw std::invalid_argument("recover_vorticity: spaces on different meshes");

    const Mesh& m = *p1space->mesh;
    const QuadratureRule& q = quadrature_rule(4);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(p1space->dof_count);
    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* dofs = p1space->cell_dofs(c);
        for (size_t g = 0; g < q.points.size(); ++g) {
            const Mat2 grad = velocity.eval_gradient(c, q.points[g]);
            const double curl = grad.b - grad.c;  // d(u2)/dx - d(u1)/dy
            const BasisEval be = eval_basis(*p1space, c, q.points[g]);
            for (int i = 0; i < 3; ++i) b[dofs[i]] += q.weights[g] * jac * curl * be.value[i];
        }
    }

    BlockSystem sys({p1space->dof_count});
    const SparseMatrix mass = assemble_mass(*p1space);
    sys.add_block(0, 0, 1.0, &mass);
    sys.set_rhs(b);
    return Field(std::move(p1space), solve(sys), velocity.time);
}

void write_snapshot_vtk(const Field& velocity, const Field& vorticity, std::ostream& os,
                        const std::string& title) {
    const Mesh& m = *velocity.space->mesh;
    if (vorticity.space->mesh.get() != &m)
        throw std::invalid_argument("write_snapshot_vtk: fields on different meshes");
    write_header(m, os, title);

    os << "POINT_DATA " << m.n_vertices() << '\n';
    os << "VECTORS velocity double\n";
    // P2 vertex dofs are point values at the vertices.
    for (int v = 0; v < m.n_vertices(); ++v)
        os << velocity.coeffs[2 * v] << ' ' << velocity.coeffs[2 * v + 1] << " 0\n";
    os << "SCALARS vorticity double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < m.n_vertices(); ++v) os << vorticity.coeffs[v] << '\n';
}

void write_mesh_vtk_file(const Mesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_mesh_vtk(mesh, os);
}

void write_snapshot_vtk_file(const Field& velocity, const Field& vorticity, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_snapshot_vtk(velocity, vorticity, os);
}

} // namespace nsfem
