#include "nsfem/projections.hpp"

#include "nsfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nsfem {

ProjectionContext::ProjectionContext(std::shared_ptr<const FESpace> vspace,
                                     std::shared_ptr<const FESpace> qspace,
                                     std::shared_ptr<const FESpace> rtspace,
                                     std::shared_ptr<const FESpace> dgspace)
    : vspace_(std::move(vspace)), qspace_(std::move(qspace)), rtspace_(std::move(rtspace)),
      dgspace_(std::move(dgspace)) {
    if (vspace_->mesh.get() != qspace_->mesh.get() || vspace_->mesh.get() != rtspace_->mesh.get() ||
        vspace_->mesh.get() != dgspace_->mesh.get())
        throw std::invalid_argument("ProjectionContext: spaces must share a mesh");

    mass_v_ = assemble_mass(*vspace_);
    mass_rt_ = assemble_mass(*rtspace_);
    div_ = assemble_divergence(*vspace_, *qspace_);
    rt_div_ = assemble_rt_divergence(*rtspace_, *dgspace_);
    mixed_ = assemble_mixed_mass(*rtspace_, *vspace_);
    pressure_integral_ = assemble_integral(*qspace_);
    dg_integral_ = assemble_integral(*dgspace_);

    // The multiplier of each saddle system is defined up to one constant (the
    // constraint rows lose exactly that rank once the essential velocity/normal
    // constraints are applied), so one multiplier dof is pinned and the
    // returned multiplier is shifted to zero mean afterwards. A bordered
    // zero-mean row would couple every multiplier dof and ruin the
    // fill-reducing ordering of the direct solver.
    pressure_pin_.assign(qspace_->dof_count, 0);
    pressure_pin_[0] = 1;
    dg_pin_.assign(dgspace_->dof_count, 0);
    dg_pin_[0] = 1;

    // Leray saddle: [M B^T; B 0] with Dirichlet velocity dofs eliminated.
    leray_sys_ = std::make_unique<BlockSystem>(std::vector<int>{vspace_->dof_count, qspace_->dof_count});
    leray_sys_->add_block(0, 0, 1.0, &mass_v_);
    leray_sys_->add_block(0, 1, 1.0, &div_, /*transpose=*/true);
    leray_sys_->add_block(1, 0, 1.0, &div_);
    leray_sys_->set_constrained(0, &vspace_->dirichlet);
    leray_sys_->set_constrained(1, &pressure_pin_);
    leray_solver_.factorize(leray_sys_->assemble());

    // RT saddle: [M_rt D^T; D 0] with boundary normal-trace dofs eliminated.
    // With w.n = 0 the divergence integrates to zero, so the DG-P1 constraints
    // are redundant by exactly the constant mode removed by the pin.
    rt_sys_ = std::make_unique<BlockSystem>(std::vector<int>{rtspace_->dof_count, dgspace_->dof_count});
    rt_sys_->add_block(0, 0, 1.0, &mass_rt_);
    rt_sys_->add_block(0, 1, 1.0, &rt_div_, /*transpose=*/true);
    rt_sys_->add_block(1, 0, 1.0, &rt_div_);
    rt_sys_->set_constrained(0, &rtspace_->dirichlet);
    rt_sys_->set_constrained(1, &dg_pin_);
    rt_solver_.factorize(rt_sys_->assemble());

    // Block-diagonal DG-P1 mass inverses, used to expand div(w) exactly.
    const Mesh& m = *vspace_->mesh;
    const QuadratureRule& q = quadrature_rule(2);
    dg_mass_inv_.resize(m.n_cells());
    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
        for (size_t g = 0; g < q.points.size(); ++g) {
            const BasisEval be = eval_basis(*dgspace_, c, q.points[g]);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    local(i, j) += q.weights[g] * jac * be.value[i] * be.value[j];
        }
        dg_mass_inv_[c] = local.inverse();
    }
}

std::pair<Field, Field> ProjectionContext::leray_project(const Eigen::VectorXd& load) const {
    if (load.size() != vspace_->dof_count)
        throw std::invalid_argument("leray_project: load size mismatch");

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(leray_sys_->dim());
    rhs.head(vspace_->dof_count) = load;
    for (int i = 0; i < vspace_->dof_count; ++i)
        if (vspace_->dirichlet[i]) rhs[i] = 0.0;
    rhs[vspace_->dof_count] = 0.0;  // pinned multiplier dof

    const Eigen::VectorXd x = leray_solver_.solve(rhs, solve_tol_);
    Field u(vspace_, x.head(vspace_->dof_count));
    Field lambda(qspace_, x.tail(qspace_->dof_count));
    // Shift the multiplier to its zero-mean representative.
    const double area = pressure_integral_.sum();
    lambda.coeffs.array() -= pressure_integral_.dot(lambda.coeffs) / area;
    return {std::move(u), std::move(lambda)};
}

Field ProjectionContext::rt_solve(Eigen::VectorXd rt_moments) const {
    for (int i = 0; i < rtspace_->dof_count; ++i)
        if (rtspace_->dirichlet[i]) rt_moments[i] = 0.0;

    const int nrt = rtspace_->dof_count;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rt_sys_->dim());
    rhs.head(nrt) = rt_moments;

    Eigen::VectorXd x = rt_solver_.solve(rhs, solve_tol_);

    // Constraint restoration: generic residual refinement levels off with the
    // large rows of the saddle, leaving the (small) divergence moments orders
    // of magnitude above roundoff on fine meshes. One targeted pass with the
    // violation alone on the right-hand side removes it entirely.
    Eigen::VectorXd correction_rhs = Eigen::VectorXd::Zero(rt_sys_->dim());
    correction_rhs.tail(dgspace_->dof_count) = -rt_div_.apply(x.head(nrt));
    correction_rhs[nrt] = 0.0;  // pinned multiplier dof
    x += rt_solver_.solve(correction_rhs, solve_tol_);

    Field w(rtspace_, x.head(nrt));

    const Eigen::VectorXd divc = rt_divergence_coefficients(w);
    const double wnorm = m_norm(mass_rt_, w.coeffs);
    const double bound = div_tol_ * std::max(wnorm, 1e-300);
    if (divc.lpNorm<Eigen::Infinity>() > bound)
        throw SolveError("rt_project: projected field is not divergence free", divc.lpNorm<Eigen::Infinity>());
    return w;
}

Field ProjectionContext::rt_project(const Field& v) const {
    if (v.space->kind != SpaceKind::P2Vector)
        throw std::invalid_argument("rt_project: expects a P2Vector field");
    if (v.space->mesh.get() != vspace_->mesh.get())
        throw std::invalid_argument("rt_project: field on a different mesh");
    return rt_solve(mixed_.apply(v.coeffs));
}

Field ProjectionContext::rt_project_rt(const Field& w) const {
    if (w.space->kind != SpaceKind::RT1 || w.space->mesh.get() != rtspace_->mesh.get())
        throw std::invalid_argument("rt_project_rt: expects an RT1 field on the context mesh");
    return rt_solve(mass_rt_.apply(w.coeffs));
}

Eigen::VectorXd ProjectionContext::rt_divergence_coefficients(const Field& w) const {
    const Eigen::VectorXd moments = rt_div_.apply(w.coeffs);
    Eigen::VectorXd coeffs(dgspace_->dof_count);
    for (size_t c = 0; c < dg_mass_inv_.size(); ++c) {
        const Eigen::Vector3d local = dg_mass_inv_[c] * moments.segment<3>(3 * static_cast<int>(c));
        coeffs.segment<3>(3 * static_cast<int>(c)) = local;
    }
    return coeffs;
}

} // namespace nsfem
