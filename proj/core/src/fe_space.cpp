#include "nsfem/fe_space.hpp"

#include "nsfem/quadrature.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace nsfem {

namespace {

// ---------------------------------------------------------------------------
// Scalar Lagrange bases on the reference triangle, barycentric input.
// Node order: vertices 0,1,2 then midpoints of edges 0 (v1v2), 1 (v2v0), 2 (v0v1).
// ---------------------------------------------------------------------------

void p1_values(const Bary& b, double* v) {
    v[0] = b[0];
    v[1] = b[1];
    v[2] = b[2];
}

// Reference gradients of the barycentric coordinates.
constexpr Vec2 kGradLambda[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};

void p2_values(const Bary& b, double* v) {
    for (int i = 0; i < 3; ++i) v[i] = b[i] * (2.0 * b[i] - 1.0);
    v[3] = 4.0 * b[1] * b[2];
    v[4] = 4.0 * b[2] * b[0];
    v[5] = 4.0 * b[0] * b[1];
}

void p2_ref_gradients(const Bary& b, Vec2* g) {
    for (int i = 0; i < 3; ++i) g[i] = kGradLambda[i] * (4.0 * b[i] - 1.0);
    g[3] = kGradLambda[1] * (4.0 * b[2]) + kGradLambda[2] * (4.0 * b[1]);
    g[4] = kGradLambda[2] * (4.0 * b[0]) + kGradLambda[0] * (4.0 * b[2]);
    g[5] = kGradLambda[0] * (4.0 * b[1]) + kGradLambda[1] * (4.0 * b[0]);
}

// ---------------------------------------------------------------------------
// RT1 reference basis. The space is P1^2 + x*P1tilde, spanned by the monomials
//   (1,0) (x,0) (y,0) (0,1) (0,x) (0,y) (x^2,xy) (xy,y^2).
// Dofs: per edge the 0th and 1st Legendre moments of the normal component
// (arclength measure, parameter from edge start to end as listed below), then
// the two interior component averages. The dual basis is computed once by
// inverting the 8x8 moment matrix.
// ---------------------------------------------------------------------------

Vec2 rt_monomial(int m, double x, double y) {
    switch (m) {
        case 0: return {1.0, 0.0};
        case 1: return {x, 0.0};
        case 2: return {y, 0.0};
        case 3: return {0.0, 1.0};
        case 4: return {0.0, x};
        case 5: return {0.0, y};
        case 6: return {x * x, x * y};
        default: return {x * y, y * y};
    }
}

double rt_monomial_div(int m, double x, double y) {
    switch (m) {
        case 1:
        case 5: return 1.0;
        case 6: return 3.0 * x;
        case 7: return 3.0 * y;
        default: return 0.0;
    }
}

struct RefEdge {
    Vec2 start, end;
    Vec2 normal;  // outward unit normal
    double length;
};

const RefEdge kRefEdges[3] = {
    {{1.0, 0.0}, {0.0, 1.0}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)}, std::sqrt(2.0)},
    {{0.0, 1.0}, {0.0, 0.0}, {-1.0, 0.0}, 1.0},
    {{0.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, 1.0},
};

// Coefficients of the dual basis: column j holds the monomial expansion of the
// basis function of local dof j.
const Eigen::Matrix<double, 8, 8>& rt_ref_coefficients() {
    static const Eigen::Matrix<double, 8, 8> coeff = [] {
        Eigen::Matrix<double, 8, 8> V;
        const EdgeRule& eg = edge_gauss(2);
        for (int k = 0; k < 3; ++k) {
            const RefEdge& e = kRefEdges[k];
            for (int m = 0; m < 8; ++m) {
                double m0 = 0.0, m1 = 0.0;
                for (size_t g = 0; g < eg.points.size(); ++g) {
                    const double s = eg.points[g];
                    const Vec2 p = e.start + (e.end - e.start) * s;
                    const double wn = rt_monomial(m, p.x, p.y).dot(e.normal);
                    m0 += eg.weights[g] * e.length * wn;
                    m1 += eg.weights[g] * e.length * wn * (2.0 * s - 1.0);
                }
                V(2 * k, m) = m0;
                V(2 * k + 1, m) = m1;
            }
        }
        const QuadratureRule& q = quadrature_rule(2);
        for (int m = 0; m < 8; ++m) {
            Vec2 avg{0.0, 0.0};
            for (size_t g = 0; g < q.points.size(); ++g)
                avg += q.weights[g] * rt_monomial(m, q.points[g][1], q.points[g][2]);
            V(6, m) = avg.x;
            V(7, m) = avg.y;
        }
        return Eigen::Matrix<double, 8, 8>(V.fullPivLu().inverse());
    }();
    return coeff;
}

} // namespace

int local_dof_count(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::P1: return 3;
        case SpaceKind::P2Vector: return 12;
        case SpaceKind::RT1: return 8;
        case SpaceKind::DGP1: return 3;
    }
    return 0;
}

int FESpace::n_dirichlet() const {
    int n = 0;
    for (char c : dirichlet) n += c;
    return n;
}

void cell_nodes_p2(const Mesh& mesh, int cell, std::array<int, 6>& nodes) {
    const int nv = mesh.n_vertices();
    for (int k = 0; k < 3; ++k) {
        nodes[k] = mesh.cells[cell][k];
        nodes[3 + k] = nv + mesh.cell_edges[cell][k];
    }
}

std::shared_ptr<const FESpace> build_space(std::shared_ptr<const Mesh> mesh, SpaceKind kind) {
    auto sp = std::make_shared<FESpace>();
    sp->kind = kind;
    sp->mesh = mesh;
    sp->local_dofs = local_dof_count(kind);
    const Mesh& m = *mesh;
    const int nv = m.n_vertices(), ne = m.n_edges(), nc = m.n_cells();

    sp->cell_to_dof.resize(static_cast<size_t>(nc) * sp->local_dofs);
    switch (kind) {
        case SpaceKind::P1:
            sp->dof_count = nv;
            for (int c = 0; c < nc; ++c)
                for (int k = 0; k < 3; ++k) sp->cell_to_dof[3 * c + k] = m.cells[c][k];
            break;
        case SpaceKind::P2Vector: {
            sp->dof_count = 2 * (nv + ne);
            std::array<int, 6> nodes;
            for (int c = 0; c < nc; ++c) {
                cell_nodes_p2(m, c, nodes);
                for (int k = 0; k < 6; ++k) {
                    sp->cell_to_dof[12 * c + 2 * k] = 2 * nodes[k];
                    sp->cell_to_dof[12 * c + 2 * k + 1] = 2 * nodes[k] + 1;
                }
            }
            sp->dirichlet.assign(sp->dof_count, 0);
            for (int v = 0; v < nv; ++v)
                if (m.boundary_vertex[v]) sp->dirichlet[2 * v] = sp->dirichlet[2 * v + 1] = 1;
            for (int e = 0; e < ne; ++e)
                if (m.boundary_edge[e]) {
                    sp->dirichlet[2 * (nv + e)] = 1;
                    sp->dirichlet[2 * (nv + e) + 1] = 1;
                }
            break;
        }
        case SpaceKind::RT1: {
            sp->dof_count = 2 * ne + 2 * nc;
            sp->rt_edge_sign.resize(static_cast<size_t>(nc) * 3);
            for (int c = 0; c < nc; ++c) {
                for (int k = 0; k < 3; ++k) {
                    const int e = m.cell_edges[c][k];
                    sp->cell_to_dof[8 * c + 2 * k] = 2 * e;
                    sp->cell_to_dof[8 * c + 2 * k + 1] = 2 * e + 1;
                    // Sign of the even moment: +1 when the cell's ccw edge
                    // direction matches the edge's ascending-id direction.
                    const int a = m.cells[c][(k + 1) % 3];
                    const int b = m.cells[c][(k + 2) % 3];
                    sp->rt_edge_sign[3 * c + k] = (a < b) ? 1.0 : -1.0;
                }
                sp->cell_to_dof[8 * c + 6] = 2 * ne + 2 * c;
                sp->cell_to_dof[8 * c + 7] = 2 * ne + 2 * c + 1;
            }
            sp->dirichlet.assign(sp->dof_count, 0);
            for (int e = 0; e < ne; ++e)
                if (m.boundary_edge[e]) sp->dirichlet[2 * e] = sp->dirichlet[2 * e + 1] = 1;
            break;
        }
        case SpaceKind::DGP1:
            sp->dof_count = 3 * nc;
            for (int c = 0; c < nc; ++c)
                for (int k = 0; k < 3; ++k) sp->cell_to_dof[3 * c + k] = 3 * c + k;
            break;
    }
    return sp;
}

BasisEval eval_basis(const FESpace& space, int cell, const Bary& b) {
    BasisEval out;
    const Mesh& m = *space.mesh;

    switch (space.kind) {
        case SpaceKind::P1:
        case SpaceKind::DGP1: {
            out.n = 3;
            p1_values(b, out.value.data());
            const Mat2 binv = m.jacobian(cell).inverse();
            for (int i = 0; i < 3; ++i) out.grad[i] = binv.apply_transposed(kGradLambda[i]);
            break;
        }
        case SpaceKind::P2Vector: {
            out.n = 6;
            p2_values(b, out.value.data());
            Vec2 ref[6];
            p2_ref_gradients(b, ref);
            const Mat2 binv = m.jacobian(cell).inverse();
            for (int i = 0; i < 6; ++i) out.grad[i] = binv.apply_transposed(ref[i]);
            break;
        }
        case SpaceKind::RT1: {
            out.n = 8;
            const Eigen::Matrix<double, 8, 8>& C = rt_ref_coefficients();
            const double x = b[1], y = b[2];
            Vec2 mono[8];
            double mono_div[8];
            for (int mi = 0; mi < 8; ++mi) {
                mono[mi] = rt_monomial(mi, x, y);
                mono_div[mi] = rt_monomial_div(mi, x, y);
            }
            const Mat2 B = m.jacobian(cell);
            const double invj = 1.0 / B.det();
            for (int j = 0; j < 8; ++j) {
                Vec2 v{0.0, 0.0};
                double dv = 0.0;
                for (int mi = 0; mi < 8; ++mi) {
                    v += C(mi, j) * mono[mi];
                    dv += C(mi, j) * mono_div[mi];
                }
                // Contravariant Piola, then the orientation sign of the even
                // edge moment (the odd moment is parity-invariant).
                double sign = 1.0;
                if (j < 6 && j % 2 == 0) sign = space.rt_edge_sign[3 * cell + j / 2];
                out.vec[j] = sign * invj * B.apply(v);
                out.div[j] = sign * invj * dv;
            }
            break;
        }
    }
    return out;
}

Field::Field(std::shared_ptr<const FESpace> s, Eigen::VectorXd c, double t)
    : space(std::move(s)), coeffs(std::move(c)), time(t) {
    if (coeffs.size() != space->dof_count)
        throw std::invalid_argument("Field: coefficient length does not match space");
}

Field Field::zero(std::shared_ptr<const FESpace> s, double t) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(s->dof_count);
    return Field(std::move(s), std::move(c), t);
}

Vec2 Field::eval_vector(int cell, const Bary& b) const {
    const BasisEval be = eval_basis(*space, cell, b);
    const int* dofs = space->cell_dofs(cell);
    Vec2 v{0.0, 0.0};
    if (space->kind == SpaceKind::P2Vector) {
        for (int k = 0; k < 6; ++k) {
            v.x += coeffs[dofs[2 * k]] * be.value[k];
            v.y += coeffs[dofs[2 * k + 1]] * be.value[k];
        }
    } else if (space->kind == SpaceKind::RT1) {
        for (int k = 0; k < 8; ++k) v += coeffs[dofs[k]] * be.vec[k];
    } else {
        throw std::invalid_argument("eval_vector: scalar space");
    }
    return v;
}

Mat2 Field::eval_gradient(int cell, const Bary& b) const {
    if (space->kind != SpaceKind::P2Vector)
        throw std::invalid_argument("eval_gradient: requires P2Vector");
    const BasisEval be = eval_basis(*space, cell, b);
    const int* dofs = space->cell_dofs(cell);
    // Columns are d/dx and d/dy of (u1,u2).
    Mat2 g{};
    for (int k = 0; k < 6; ++k) {
        const double c1 = coeffs[dofs[2 * k]];
        const double c2 = coeffs[dofs[2 * k + 1]];
        g.a += c1 * be.grad[k].x;
        g.b += c2 * be.grad[k].x;
        g.c += c1 * be.grad[k].y;
        g.d += c2 * be.grad[k].y;
    }
    return g;
}

double Field::eval_scalar(int cell, const Bary& b) const {
    if (space->kind != SpaceKind::P1 && space->kind != SpaceKind::DGP1)
        throw std::invalid_argument("eval_scalar: vector space");
    const BasisEval be = eval_basis(*space, cell, b);
    const int* dofs = space->cell_dofs(cell);
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += coeffs[dofs[k]] * be.value[k];
    return v;
}

} // namespace nsfem
