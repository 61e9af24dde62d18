#include "nsfem/assembly.hpp"

#include "nsfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nsfem {

namespace {

void require_kind(const FESpace& s, SpaceKind k, const char* what) {
    if (s.kind != k) throw std::invalid_argument(std::string(what) + ": wrong space kind");
}

void require_same_mesh(const FESpace& a, const FESpace& b, const char* what) {
    if (a.mesh.get() != b.mesh.get())
        throw std::invalid_argument(std::string(what) + ": spaces on different meshes");
}

} // namespace

SparseMatrix assemble_mass(const FESpace& space) {
    const Mesh& m = *space.mesh;
    const QuadratureRule& q = quadrature_rule(space.kind == SpaceKind::RT1 || space.kind == SpaceKind::P2Vector ? 4 : 2);
    std::vector<Triplet> t;

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* dofs = space.cell_dofs(c);

        if (space.kind == SpaceKind::RT1) {
            double local[8][8] = {};
            for (size_t g = 0; g < q.points.size(); ++g) {
                const BasisEval be = eval_basis(space, c, q.points[g]);
                const double w = q.weights[g] * jac;
                for (int i = 0; i < 8; ++i)
                    for (int j = 0; j < 8; ++j) local[i][j] += w * be.vec[i].dot(be.vec[j]);
            }
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) t.push_back({dofs[i], dofs[j], local[i][j]});
        } else {
            const int n = (space.kind == SpaceKind::P2Vector) ? 6 : 3;
            double local[6][6] = {};
            for (size_t g = 0; g < q.points.size(); ++g) {
                const BasisEval be = eval_basis(space, c, q.points[g]);
                const double w = q.weights[g] * jac;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) local[i][j] += w * be.value[i] * be.value[j];
            }
            if (space.kind == SpaceKind::P2Vector) {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        for (int comp = 0; comp < 2; ++comp)
                            t.push_back({dofs[2 * i + comp], dofs[2 * j + comp], local[i][j]});
            } else {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) t.push_back({dofs[i], dofs[j], local[i][j]});
            }
        }
    }
    return SparseMatrix::from_triplets(space.dof_count, space.dof_count, std::move(t));
}

SparseMatrix assemble_stiffness(const FESpace& space, double nu) {
    require_kind(space, SpaceKind::P2Vector, "assemble_stiffness");
    const Mesh& m = *space.mesh;
    const QuadratureRule& q = quadrature_rule(4);
    std::vector<Triplet> t;

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* dofs = space.cell_dofs(c);
        double local[6][6] = {};
        for (size_t g = 0; g < q.points.size(); ++g) {
            const BasisEval be = eval_basis(space, c, q.points[g]);
            const double w = nu * q.weights[g] * jac;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) local[i][j] += w * be.grad[i].dot(be.grad[j]);
        }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                for (int comp = 0; comp < 2; ++comp)
                    t.push_back({dofs[2 * i + comp], dofs[2 * j + comp], local[i][j]});
    }
    return SparseMatrix::from_triplets(space.dof_count, space.dof_count, std::move(t));
}

SparseMatrix assemble_divergence(const FESpace& vspace, const FESpace& qspace) {
    require_kind(vspace, SpaceKind::P2Vector, "assemble_divergence");
    require_kind(qspace, SpaceKind::P1, "assemble_divergence");
    require_same_mesh(vspace, qspace, "assemble_divergence");
    const Mesh& m = *vspace.mesh;
    const QuadratureRule& q = quadrature_rule(4);
    std::vector<Triplet> t;

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* vdofs = vspace.cell_dofs(c);
        const int* qdofs = qspace.cell_dofs(c);
        double local[3][12] = {};
        for (size_t g = 0; g < q.points.size(); ++g) {
            const BasisEval bv = eval_basis(vspace, c, q.points[g]);
            const BasisEval bq = eval_basis(qspace, c, q.points[g]);
            const double w = q.weights[g] * jac;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 6; ++j) {
                    local[i][2 * j] += w * bq.value[i] * bv.grad[j].x;
                    local[i][2 * j + 1] += w * bq.value[i] * bv.grad[j].y;
                }
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 12; ++j) t.push_back({qdofs[i], vdofs[j], local[i][j]});
    }
    return SparseMatrix::from_triplets(qspace.dof_count, vspace.dof_count, std::move(t));
}

SparseMatrix assemble_convection(const Field& w, const FESpace& vspace) {
    require_kind(*w.space, SpaceKind::RT1, "assemble_convection");
    require_kind(vspace, SpaceKind::P2Vector, "assemble_convection");
    require_same_mesh(*w.space, vspace, "assemble_convection");
    const Mesh& m = *vspace.mesh;
    const QuadratureRule& q = quadrature_rule(5);
    std::vector<Triplet> t;

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* vdofs = vspace.cell_dofs(c);
        double local[6][6] = {};
        for (size_t g = 0; g < q.points.size(); ++g) {
            const Vec2 wv = w.eval_vector(c, q.points[g]);
            const BasisEval bv = eval_basis(vspace, c, q.points[g]);
            const double wt = q.weights[g] * jac;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    local[i][j] += wt * wv.dot(bv.grad[j]) * bv.value[i];
        }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                for (int comp = 0; comp < 2; ++comp)
                    t.push_back({vdofs[2 * i + comp], vdofs[2 * j + comp], local[i][j]});
    }
    return SparseMatrix::from_triplets(vspace.dof_count, vspace.dof_count, std::move(t));
}

SparseMatrix assemble_rt_divergence(const FESpace& rtspace, const FESpace& dgspace) {
    require_kind(rtspace, SpaceKind::RT1, "assemble_rt_divergence");
    require_kind(dgspace, SpaceKind::DGP1, "assemble_rt_divergence");
    require_same_mesh(rtspace, dgspace, "assemble_rt_divergence");
    const Mesh& m = *rtspace.mesh;
    const QuadratureRule& q = quadrature_rule(2);
    std::vector<Triplet> t;

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* rdofs = rtspace.cell_dofs(c);
        const int* ddofs = dgspace.cell_dofs(c);
        double local[3][8] = {};
        for (size_t g = 0; g < q.points.size(); ++g) {
            const BasisEval br = eval_basis(rtspace, c, q.points[g]);
            const BasisEval bd = eval_basis(dgspace, c, q.points[g]);
            const double w = q.weights[g] * jac;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 8; ++j) local[i][j] += w * bd.value[i] * br.div[j];
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 8; ++j) t.push_back({ddofs[i], rdofs[j], local[i][j]});
    }
    return SparseMatrix::from_triplets(dgspace.dof_count, rtspace.dof_count, std::move(t));
}

SparseMatrix assemble_mixed_mass(const FESpace& rtspace, const FESpace& vspace) {
    require_kind(rtspace, SpaceKind::RT1, "assemble_mixed_mass");
    require_kind(vspace, SpaceKind::P2Vector, "assemble_mixed_mass");
    require_same_mesh(rtspace, vspace, "assemble_mixed_mass");
    const Mesh& m = *rtspace.mesh;
    const QuadratureRule& q = quadrature_rule(4);
    std::vector<Triplet> t;

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* rdofs = rtspace.cell_dofs(c);
        const int* vdofs = vspace.cell_dofs(c);
        double local[8][12] = {};
        for (size_t g = 0; g < q.points.size(); ++g) {
            const BasisEval br = eval_basis(rtspace, c, q.points[g]);
            const BasisEval bv = eval_basis(vspace, c, q.points[g]);
            const double w = q.weights[g] * jac;
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 6; ++j) {
                    local[i][2 * j] += w * br.vec[i].x * bv.value[j];
                    local[i][2 * j + 1] += w * br.vec[i].y * bv.value[j];
                }
        }
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 12; ++j) t.push_back({rdofs[i], vdofs[j], local[i][j]});
    }
    return SparseMatrix::from_triplets(rtspace.dof_count, vspace.dof_count, std::move(t));
}

Eigen::VectorXd assemble_load(const FESpace& space, const ScalarFn& f) {
    if (space.kind != SpaceKind::P1 && space.kind != SpaceKind::DGP1)
        throw std::invalid_argument("assemble_load: scalar load needs a scalar space");
    const Mesh& m = *space.mesh;
    const QuadratureRule& q = quadrature_rule(6);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dof_count);

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* dofs = space.cell_dofs(c);
        for (size_t g = 0; g < q.points.size(); ++g) {
            const Vec2 p = m.point(c, q.points[g]);
            const double fv = f(p.x, p.y);
            const BasisEval be = eval_basis(space, c, q.points[g]);
            const double w = q.weights[g] * jac;
            for (int i = 0; i < 3; ++i) b[dofs[i]] += w * fv * be.value[i];
        }
    }
    return b;
}

Eigen::VectorXd assemble_load(const FESpace& space, const VectorFn& f) {
    require_kind(space, SpaceKind::P2Vector, "assemble_load(vector)");
    const Mesh& m = *space.mesh;
    const QuadratureRule& q = quadrature_rule(6);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dof_count);

    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* dofs = space.cell_dofs(c);
        for (size_t g = 0; g < q.points.size(); ++g) {
            const Vec2 p = m.point(c, q.points[g]);
            const Vec2 fv = f(p.x, p.y);
            const BasisEval be = eval_basis(space, c, q.points[g]);
            const double w = q.weights[g] * jac;
            for (int i = 0; i < 6; ++i) {
                b[dofs[2 * i]] += w * fv.x * be.value[i];
                b[dofs[2 * i + 1]] += w * fv.y * be.value[i];
            }
        }
    }
    return b;
}

Eigen::VectorXd assemble_integral(const FESpace& space) {
    if (space.kind != SpaceKind::P1 && space.kind != SpaceKind::DGP1)
        throw std::invalid_argument("assemble_integral: scalar spaces only");
    const Mesh& m = *space.mesh;
    const QuadratureRule& q = quadrature_rule(2);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.dof_count);
    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        const int* dofs = space.cell_dofs(c);
        for (size_t g = 0; g < q.points.size(); ++g) {
            const BasisEval be = eval_basis(space, c, q.points[g]);
            for (int i = 0; i < 3; ++i) b[dofs[i]] += q.weights[g] * jac * be.value[i];
        }
    }
    return b;
}

double m_norm(const SparseMatrix& mass, const Eigen::VectorXd& v) {
    return std::sqrt(std::max(0.0, v.dot(mass.apply(v))));
}

} // namespace nsfem
