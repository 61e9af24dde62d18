#pragma once

// Degree-of-freedom maps and reference-element bases for the four spaces the
// scheme needs: continuous P1 (pressure), vector P2 (velocity, components
// interleaved), Raviart-Thomas RT1 (advecting field), and discontinuous P1
// (divergence multiplier). Spaces are immutable; evaluation is pure.

#include "nsfem/geometry.hpp"
#include "nsfem/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace nsfem {

using ScalarFn = std::function<double(double, double)>;
using VectorFn = std::function<Vec2(double, double)>;

enum class SpaceKind { P1, P2Vector, RT1, DGP1 };

// Local dof counts per cell: P1 = 3, P2Vector = 12, RT1 = 8, DGP1 = 3.
int local_dof_count(SpaceKind kind);

class FESpace {
public:
    SpaceKind kind;
    std::shared_ptr<const Mesh> mesh;
    int dof_count = 0;
    int local_dofs = 0;
    std::vector<int> cell_to_dof;        // row-major, local_dofs per cell
    std::vector<char> dirichlet;         // mask over global dofs (essential constraints)
    std::vector<double> rt_edge_sign;    // RT1 only: sign of the even edge moment, 3 per cell

    const int* cell_dofs(int c) const { return cell_to_dof.data() + static_cast<size_t>(c) * local_dofs; }
    int n_dirichlet() const;
};

// Deterministic numbering: vertices, then edges, then cells, in index order;
// vector components interleaved. For P2Vector the essential set is every dof on
// the boundary; for RT1 it is both normal moments of every boundary edge.
std::shared_ptr<const FESpace> build_space(std::shared_ptr<const Mesh> mesh, SpaceKind kind);

// Basis values at one reference point of one cell. Scalar families (P1,
// P2Vector nodes, DGP1) fill value/grad; RT1 fills vec/div. For P2Vector, n = 6
// scalar node functions; global dof 2*node+c pairs node function n with
// component c.
struct BasisEval {
    int n = 0;
    std::array<double, 6> value{};
    std::array<Vec2, 6> grad{};   // physical gradients
    std::array<Vec2, 8> vec{};    // RT1 values (contravariant Piola), global orientation
    std::array<double, 8> div{};  // RT1 divergences
};

BasisEval eval_basis(const FESpace& space, int cell, const Bary& b);

// Scalar node count for a space (3 for P1/DGP1, 6 for P2Vector); the node ids a
// cell touches, in the order eval_basis reports them.
void cell_nodes_p2(const Mesh& mesh, int cell, std::array<int, 6>& nodes);

// Coefficient vector bound to a space; Dirichlet dofs of constrained fields are zero.
struct Field {
    std::shared_ptr<const FESpace> space;
    Eigen::VectorXd coeffs;
    double time = 0.0;

    Field() = default;
    Field(std::shared_ptr<const FESpace> s, Eigen::VectorXd c, double t = 0.0);

    static Field zero(std::shared_ptr<const FESpace> s, double t = 0.0);

    // Vector-valued evaluation (P2Vector or RT1).
    Vec2 eval_vector(int cell, const Bary& b) const;
    // Velocity gradient [du1/dx du1/dy; du2/dx du2/dy] (P2Vector only).
    Mat2 eval_gradient(int cell, const Bary& b) const;
    // Scalar evaluation (P1 or DGP1).
    double eval_scalar(int cell, const Bary& b) const;
};

} // namespace nsfem
