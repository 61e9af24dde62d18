#pragma once

// Global operator assembly by cell loops. Quadrature degrees: mass/stiffness
// and mixed mass use degree 4, convection degree 5, analytic loads degree 6 —
// exact for every polynomial integrand that appears.

#include "nsfem/fe_space.hpp"
#include "nsfem/sparse.hpp"

namespace nsfem {

// (phi_j, phi_i) for any space kind; symmetric positive definite.
SparseMatrix assemble_mass(const FESpace& space);

// nu * (grad phi_j, grad phi_i) on P2Vector; singular before boundary conditions.
SparseMatrix assemble_stiffness(const FESpace& space, double nu);

// (div phi_j, q_i), rows in the P1 pressure space.
SparseMatrix assemble_divergence(const FESpace& vspace, const FESpace& qspace);

// ((w . grad phi_j), phi_i) for an RT1 advecting field w, on P2Vector.
SparseMatrix assemble_convection(const Field& w, const FESpace& vspace);

// (div chi_j, d_i): RT1 columns against DGP1 rows. div(RT1) lies in DGP1, so
// these moments vanish exactly iff the field is pointwise divergence free.
SparseMatrix assemble_rt_divergence(const FESpace& rtspace, const FESpace& dgspace);

// (chi_i, phi_j): RT1 rows, P2Vector columns.
SparseMatrix assemble_mixed_mass(const FESpace& rtspace, const FESpace& vspace);

// Load vectors (f, phi_i); scalar f for P1/DGP1, vector f for P2Vector.
Eigen::VectorXd assemble_load(const FESpace& space, const ScalarFn& f);
Eigen::VectorXd assemble_load(const FESpace& space, const VectorFn& f);

// Integral of each basis function (mean shifts of the saddle multipliers).
Eigen::VectorXd assemble_integral(const FESpace& space);

// sqrt(v^T M v) for a coefficient vector in the space of M.
double m_norm(const SparseMatrix& mass, const Eigen::VectorXd& v);

} // namespace nsfem
