#pragma once

// One step of the fully discrete scheme: extrapolate the advecting velocity,
// project it onto the divergence-free RT1 subspace, solve the coupled
// two-stage saddle-point system (linear, since the advecting fields are known
// before the solve), and advance with energy, divergence and stiff-accuracy
// checks.

#include "nsfem/linear_solver.hpp"
#include "nsfem/projections.hpp"
#include "nsfem/time_grid.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace nsfem {

// The four spaces and cached projection factorizations for one mesh.
struct Discretization {
    std::shared_ptr<const Mesh> mesh;
    std::shared_ptr<const FESpace> velocity;
    std::shared_ptr<const FESpace> pressure;
    std::shared_ptr<const FESpace> rt;
    std::shared_ptr<const FESpace> dg;
    std::shared_ptr<const ProjectionContext> projections;

    explicit Discretization(std::shared_ptr<const Mesh> m);
};

using ForcingFn = std::function<Vec2(double, double, double)>;  // f(x, y, t)

struct StepDiagnostics {
    double t = 0.0;
    double tau = 0.0;
    double energy = 0.0;        // ||u^{n+1}||_{L2}^2
    double dissipation = 0.0;   // 2 nu tau sum_i b_i ||grad u^{n,i}||^2
    double energy_slack = 0.0;  // energy gain beyond the decay identity (f = 0)
    double div_inf = 0.0;       // ||B u^{n+1}||_inf relative to ||u^{n+1}||
    double stiff_error = 0.0;   // ||u^{n+1} - u^{n,2}|| relative
    double skew = 0.0;          // max_i |u_i^T N(w_i) u_i|, scaled
    double wall_seconds = 0.0;
};

struct SolverState {
    int n = 0;
    double t = 0.0;
    Field u_prev;   // u^{n-1}; unused at n = 0
    Field u_curr;   // u^n
    Field stage_u[2];
    Field stage_p[2];
    std::vector<StepDiagnostics> history;
};

class NSStepper {
public:
    struct Options {
        double nu = 0.1;
        bool convection = true;
        ForcingFn forcing;          // empty = no forcing
        double solver_tol = 1e-10;
        double stiff_tol = 1e-9;    // relative stiff-accuracy mismatch allowed
        double div_tol = 1e-9;      // relative discrete-divergence bound
        double energy_tol = 1e-9;   // relative per-step energy-decay slack (f = 0)
        bool checks = true;
    };

    NSStepper(std::shared_ptr<const Discretization> disc, Options opt);

    const Discretization& disc() const { return *disc_; }
    const Options& options() const { return opt_; }
    const SparseMatrix& velocity_mass() const { return disc_->projections->velocity_mass(); }
    const SparseMatrix& unit_stiffness() const { return stiffness_unit_; }

    // u_h^0: the Leray projection of the analytic datum.
    SolverState initial_state(const VectorFn& u0) const;
    SolverState initial_state(Field u0) const;

    // Advances state from level n to n+1 on the grid.
    void step(SolverState& state, const TimeGrid& grid);

    // Runs the whole grid; the optional callback sees the state after each step.
    SolverState run(const TimeGrid& grid, const VectorFn& u0,
                    const std::function<void(const SolverState&)>& on_step = {});

private:
    std::shared_ptr<const Discretization> disc_;
    Options opt_;
    ButcherTableau tableau_;
    SparseMatrix stiffness_unit_;     // nu = 1; scaled by nu inside the stage blocks
    Eigen::VectorXd pressure_integral_;
    std::vector<char> pressure_pin_;  // stage multipliers are pinned, then mean-shifted
    DirectSolver mass_solver_;        // Dirichlet-constrained velocity mass
    DirectSolver stage_solver_;       // reuses the symbolic analysis across steps
    double stage_tau_ = -1.0;         // stepsize of the cached stage factorization
    double energy_reference_ = -1.0;
};

} // namespace nsfem
