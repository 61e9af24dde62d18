#pragma once

// The two projections the scheme is built on: the discrete Leray projection
// onto the discretely divergence-free Taylor-Hood subspace, and the L2
// projection onto the exactly divergence-free, zero-normal-trace RT1 subspace.
// Both are realized as saddle-point systems whose factorizations are built
// once per mesh and cached.

#include "nsfem/assembly.hpp"
#include "nsfem/fe_space.hpp"
#include "nsfem/linear_solver.hpp"
#include "nsfem/sparse.hpp"

#include <memory>

namespace nsfem {

class ProjectionContext {
public:
    ProjectionContext(std::shared_ptr<const FESpace> vspace, std::shared_ptr<const FESpace> qspace,
                      std::shared_ptr<const FESpace> rtspace, std::shared_ptr<const FESpace> dgspace);

    const FESpace& velocity_space() const { return *vspace_; }
    const FESpace& pressure_space() const { return *qspace_; }
    const FESpace& rt_space() const { return *rtspace_; }
    const FESpace& dg_space() const { return *dgspace_; }

    const SparseMatrix& velocity_mass() const { return mass_v_; }
    const SparseMatrix& rt_mass() const { return mass_rt_; }
    const SparseMatrix& divergence() const { return div_; }
    const SparseMatrix& rt_divergence() const { return rt_div_; }
    const SparseMatrix& mixed_mass() const { return mixed_; }

    // Relative bound on the DG-P1 expansion of div(w) accepted for rt_project
    // outputs (scaled by the L2 norm of w).
    double divergence_tolerance() const { return div_tol_; }

    // Velocity+multiplier pair solving M u + B^T p = load, B u = 0, with zero
    // Dirichlet velocity and a zero-mean multiplier.
    std::pair<Field, Field> leray_project(const Eigen::VectorXd& load) const;

    // L2 projection of a P2 velocity onto the divergence-free, zero normal
    // trace RT1 subspace; checks the divergence expansion of the result.
    Field rt_project(const Field& v) const;
    // Same projection applied to an RT1 input (fixed point of the projection).
    Field rt_project_rt(const Field& w) const;

    // Coefficients of div(w) in DG-P1 (exact elementwise expansion).
    Eigen::VectorXd rt_divergence_coefficients(const Field& w) const;

private:
    Field rt_solve(Eigen::VectorXd rt_moments) const;

    std::shared_ptr<const FESpace> vspace_, qspace_, rtspace_, dgspace_;
    SparseMatrix mass_v_, mass_rt_, div_, rt_div_, mixed_;
    Eigen::VectorXd pressure_integral_, dg_integral_;
    std::vector<char> pressure_pin_, dg_pin_;
    std::unique_ptr<BlockSystem> leray_sys_, rt_sys_;
    DirectSolver leray_solver_, rt_solver_;
    std::vector<Eigen::Matrix3d> dg_mass_inv_;  // per-cell DG-P1 mass inverses
    double div_tol_ = 1e-11;
    double solve_tol_ = 1e-12;
};

} // namespace nsfem
