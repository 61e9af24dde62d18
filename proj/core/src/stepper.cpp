#include "nsfem/stepper.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace nsfem {

Discretization::Discretization(std::shared_ptr<const Mesh> m) : mesh(std::move(m)) {
    velocity = build_space(mesh, SpaceKind::P2Vector);
    pressure = build_space(mesh, SpaceKind::P1);
    rt = build_space(mesh, SpaceKind::RT1);
    dg = build_space(mesh, SpaceKind::DGP1);
    projections = std::make_shared<ProjectionContext>(velocity, pressure, rt, dg);
}

NSStepper::NSStepper(std::shared_ptr<const Discretization> disc, Options opt)
    : disc_(std::move(disc)), opt_(opt), tableau_(lobatto_iiic()) {
    stiffness_unit_ = assemble_stiffness(*disc_->velocity, 1.0);
    pressure_integral_ = assemble_integral(*disc_->pressure);
    pressure_pin_.assign(disc_->pressure->dof_count, 0);
    pressure_pin_[0] = 1;

    BlockSystem mass_sys({disc_->velocity->dof_count});
    mass_sys.add_block(0, 0, 1.0, &disc_->projections->velocity_mass());
    mass_sys.set_constrained(0, &disc_->velocity->dirichlet);
    mass_solver_.factorize(mass_sys.assemble());
}

SolverState NSStepper::initial_state(const VectorFn& u0) const {
    auto [u, lambda] = disc_->projections->leray_project(assemble_load(*disc_->velocity, u0));
    (void)lambda;
    return initial_state(std::move(u));
}

SolverState NSStepper::initial_state(Field u0) const {
    if (u0.space.get() != disc_->velocity.get())
        throw std::invalid_argument("initial_state: field not on the velocity space");
    SolverState s;
    s.n = 0;
    s.t = 0.0;
    s.u_curr = std::move(u0);
    s.u_curr.time = 0.0;
    return s;
}

void NSStepper::step(SolverState& state, const TimeGrid& grid) {
    const auto wall_start = std::chrono::steady_clock::now();
    if (state.n + 1 > grid.n_steps())
        throw std::invalid_argument("step: past the final time level");
    if (std::fabs(state.t - grid.t(state.n)) > 1e-12 * std::max(1.0, grid.final_time()))
        throw std::invalid_argument("step: state time inconsistent with grid level");

    const FESpace& V = *disc_->velocity;
    const FESpace& Q = *disc_->pressure;
    const ProjectionContext& proj = *disc_->projections;
    const SparseMatrix& M = proj.velocity_mass();
    const SparseMatrix& B = proj.divergence();
    const int nv = V.dof_count, np = Q.dof_count;

    const double tau = grid.tau(state.n + 1);
    const double tau_prev = state.n >= 1 ? grid.tau(state.n) : 0.0;
    const auto& a = tableau_.a;
    const auto& b = tableau_.b;
    const auto& c = tableau_.c;

    // Advecting fields, known before the solve: w_i = P_RT(extrapolation at c_i).
    Field w[2];
    SparseMatrix conv[2];
    if (opt_.convection) {
        for (int i = 0; i < 2; ++i) {
            const Field adv = extrapolate(state.u_prev, state.u_curr, tau_prev, tau, c[i], state.n);
            w[i] = proj.rt_project(adv);
            conv[i] = assemble_convection(w[i], V);
        }
    }

    // Coupled two-stage system in blocks [u1 p1 u2 p2]. Each stage multiplier
    // is determined up to a constant; one dof is pinned and the mean is
    // shifted off afterwards (the velocity is unaffected, since B^T annihilates
    // constants).
    BlockSystem sys({nv, np, nv, np});
    for (int i = 0; i < 2; ++i) {
        const int ui = 2 * i, pi = 2 * i + 1;
        sys.set_constrained(ui, &V.dirichlet);
        sys.set_constrained(pi, &pressure_pin_);
        sys.add_block(ui, ui, 1.0, &M);
        for (int j = 0; j < 2; ++j) {
            const int uj = 2 * j, pj = 2 * j + 1;
            sys.add_block(ui, uj, tau * a[i][j] * opt_.nu, &stiffness_unit_);
            if (opt_.convection) sys.add_block(ui, uj, tau * a[i][j], &conv[j]);
            sys.add_block(ui, pj, -tau * a[i][j], &B, /*transpose=*/true);
        }
        sys.add_block(pi, ui, 1.0, &B);
    }

    Eigen::VectorXd forcing_load[2];
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.dim());
    const Eigen::VectorXd mu = M.apply(state.u_curr.coeffs);
    for (int i = 0; i < 2; ++i) {
        Eigen::VectorXd r = mu;
        if (opt_.forcing) {
            for (int j = 0; j < 2; ++j) {
                if (forcing_load[j].size() == 0) {
                    const double tj = state.t + c[j] * tau;
                    forcing_load[j] = assemble_load(V, [&](double x, double y) { return opt_.forcing(x, y, tj); });
                }
                r += tau * a[i][j] * forcing_load[j];
            }
        }
        rhs.segment(sys.block_offset(2 * i), nv) = r;
    }
    sys.set_rhs(rhs);

    // Without convection the stage matrix depends on tau alone, so uniform-grid
    // Stokes runs refactorize only when the stepsize changes.
    if (opt_.convection || tau != stage_tau_ || !stage_solver_.factorized()) {
        stage_solver_.factorize(sys.assemble());
        stage_tau_ = tau;
    }
    const Eigen::VectorXd x = stage_solver_.solve(sys.constrained_rhs(), opt_.solver_tol);

    const double area = pressure_integral_.sum();
    Field stage_u[2], stage_p[2];
    for (int i = 0; i < 2; ++i) {
        stage_u[i] = Field(disc_->velocity, x.segment(sys.block_offset(2 * i), nv), state.t + c[i] * tau);
        stage_p[i] = Field(disc_->pressure, x.segment(sys.block_offset(2 * i + 1), np), state.t + c[i] * tau);
        stage_p[i].coeffs.array() -= pressure_integral_.dot(stage_p[i].coeffs) / area;
    }

    // Endpoint update from the stage derivatives; by stiff accuracy it must
    // reproduce the second stage.
    Field k[2];
    for (int i = 0; i < 2; ++i) {
        Eigen::VectorXd r = -opt_.nu * stiffness_unit_.apply(stage_u[i].coeffs);
        if (opt_.convection) r -= conv[i].apply(stage_u[i].coeffs);
        r += B.apply_transposed(stage_p[i].coeffs);
        if (opt_.forcing) r += forcing_load[i];
        for (int d = 0; d < nv; ++d)
            if (V.dirichlet[d]) r[d] = 0.0;
        k[i] = Field(disc_->velocity, mass_solver_.solve(r, opt_.solver_tol));
    }
    Field u_next = Field(disc_->velocity,
                         state.u_curr.coeffs + tau * (b[0] * k[0].coeffs + b[1] * k[1].coeffs),
                         state.t + tau);

    // Diagnostics and runtime invariants.
    StepDiagnostics diag;
    diag.t = state.t + tau;
    diag.tau = tau;
    const double e_old = state.u_curr.coeffs.dot(M.apply(state.u_curr.coeffs));
    diag.energy = u_next.coeffs.dot(M.apply(u_next.coeffs));
    double dissipation = 0.0;
    for (int i = 0; i < 2; ++i)
        dissipation += b[i] * stage_u[i].coeffs.dot(stiffness_unit_.apply(stage_u[i].coeffs));
    diag.dissipation = 2.0 * opt_.nu * tau * dissipation;
    diag.energy_slack = diag.energy - e_old + diag.dissipation;

    const double unorm = m_norm(M, u_next.coeffs);
    diag.div_inf = B.apply(u_next.coeffs).lpNorm<Eigen::Infinity>() / std::max(unorm, 1e-300);
    diag.stiff_error = m_norm(M, u_next.coeffs - stage_u[1].coeffs) / std::max(unorm, 1e-300);

    if (opt_.convection) {
        for (int i = 0; i < 2; ++i) {
            const double wnorm = m_norm(proj.rt_mass(), w[i].coeffs);
            const double h1 = stage_u[i].coeffs.dot(M.apply(stage_u[i].coeffs)) +
                              stage_u[i].coeffs.dot(stiffness_unit_.apply(stage_u[i].coeffs));
            const double scale = std::max(wnorm * h1, 1e-300);
            diag.skew = std::max(diag.skew,
                                 std::fabs(stage_u[i].coeffs.dot(conv[i].apply(stage_u[i].coeffs))) / scale);
        }
    }

    if (opt_.checks) {
        if (diag.stiff_error > opt_.stiff_tol)
            throw std::runtime_error("step: stiff-accuracy mismatch between endpoint update and second stage");
        if (diag.div_inf > opt_.div_tol)
            throw std::runtime_error("step: velocity not discretely divergence free");
        const double e_ref = energy_reference_ >= 0.0 ? energy_reference_ : e_old;
        if (!opt_.forcing && diag.energy_slack > opt_.energy_tol * std::max(e_ref, 1e-300))
            throw std::runtime_error("step: discrete energy decay violated");
        if (opt_.convection && diag.skew > 1e-9)
            throw std::runtime_error("step: convection term not skew on the divergence-free advecting field");
    }

    state.u_prev = std::move(state.u_curr);
    state.u_curr = std::move(u_next);
    state.stage_u[0] = std::move(stage_u[0]);
    state.stage_u[1] = std::move(stage_u[1]);
    state.stage_p[0] = std::move(stage_p[0]);
    state.stage_p[1] = std::move(stage_p[1]);
    state.n += 1;
    state.t = diag.t;
    diag.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    state.history.push_back(diag);
}

SolverState NSStepper::run(const TimeGrid& grid, const VectorFn& u0,
                           const std::function<void(const SolverState&)>& on_step) {
    SolverState state = initial_state(u0);
    const SparseMatrix& M = disc_->projections->velocity_mass();
    energy_reference_ = state.u_curr.coeffs.dot(M.apply(state.u_curr.coeffs));
    while (state.n < grid.n_steps()) {
        step(state, grid);
        if (on_step) on_step(state);
    }
    energy_reference_ = -1.0;
    return state;
}

} // namespace nsfem
