#include "nsfem/convergence.hpp"
#include "nsfem/initial_data.hpp"
#include "nsfem/projections.hpp"
#include "nsfem/stepper.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nsfem;

namespace {

std::shared_ptr<const Discretization> disc_on(double x0, double x1, double y0, double y1, int n) {
    auto mesh = std::make_shared<Mesh>(build_rect_mesh(x0, x1, y0, y1, n, n));
    return std::make_shared<Discretization>(mesh);
}

// Unconstrained L2 projection of an analytic field onto P2.
Field l2_project_p2(const Discretization& d, const VectorFn& f) {
    BlockSystem sys({d.velocity->dof_count});
    sys.add_block(0, 0, 1.0, &d.projections->velocity_mass());
    sys.set_rhs(assemble_load(*d.velocity, f));
    return Field(d.velocity, solve(sys, 1e-12));
}

} // namespace

TEST_CASE("leray: projection fixes its range and is idempotent") {
    auto d = disc_on(0, 1, 0, 1, 3);
    const ProjectionContext& proj = *d->projections;

    // Project an arbitrary load once; the output lies in the discretely
    // divergence-free subspace with zero boundary values.
    const Eigen::VectorXd load =
        assemble_load(*d->velocity, VectorFn([](double x, double y) {
                          return Vec2{std::sin(3 * x) + y, std::cos(2 * y) * x};
                      }));
    auto [u, lambda] = proj.leray_project(load);
    const double unorm = m_norm(proj.velocity_mass(), u.coeffs);
    CHECK(proj.divergence().apply(u.coeffs).lpNorm<Eigen::Infinity>() <= 1e-10 * unorm);
    for (int i = 0; i < d->velocity->dof_count; ++i)
        if (d->velocity->dirichlet[i]) CHECK(u.coeffs[i] == 0.0);

    // The multiplier has zero mean.
    CHECK(std::fabs(assemble_integral(*d->pressure).dot(lambda.coeffs)) <= 1e-10 * unorm);

    // Feeding M u back reproduces u: the projection is the identity on its range.
    auto [u2, lambda2] = proj.leray_project(proj.velocity_mass().apply(u.coeffs));
    CHECK(m_norm(proj.velocity_mass(), u2.coeffs - u.coeffs) <= 1e-10 * unorm);
}

TEST_CASE("leray: contraction on the discontinuous shear datum") {
    auto d = disc_on(-M_PI, M_PI, -M_PI, M_PI, 8);
    const Eigen::VectorXd load = assemble_load(*d->velocity, initial_shear());
    auto [u, lambda] = d->projections->leray_project(load);
    const double norm = m_norm(d->projections->velocity_mass(), u.coeffs);
    const double exact = std::sqrt(100.0 * 4.0 * M_PI * M_PI);  // 20 pi
    CHECK(norm <= exact * (1.0 + 1e-10));
    CHECK(norm > 0.5 * exact);  // projection keeps most of the datum
}

TEST_CASE("rt: essential boundary dofs vanish for a constant input") {
    auto d = disc_on(0, 1, 0, 1, 2);
    const Field v = l2_project_p2(*d, [](double, double) { return Vec2{1.0, 1.0}; });
    const Field w = d->projections->rt_project(v);
    for (int i = 0; i < d->rt->dof_count; ++i)
        if (d->rt->dirichlet[i]) CHECK(w.coeffs[i] == 0.0);
}

TEST_CASE("rt: exact divergence-freeness and idempotence") {
    auto d = disc_on(-1, 1, -1, 1, 4);
    const Field v = l2_project_p2(*d, [](double x, double y) {
        return Vec2{std::sin(x + y), std::cos(x) * y};
    });
    const Field w = d->projections->rt_project(v);
    const double wnorm = m_norm(d->projections->rt_mass(), w.coeffs);

    const Eigen::VectorXd divc = d->projections->rt_divergence_coefficients(w);
    CHECK(divc.lpNorm<Eigen::Infinity>() <= 1e-11 * wnorm);

    // Contraction in L2.
    const double vnorm = m_norm(d->projections->velocity_mass(), v.coeffs);
    CHECK(wnorm <= vnorm * (1.0 + 1e-10));

    // Direct idempotence on RT inputs.
    const Field w2 = d->projections->rt_project_rt(w);
    CHECK(m_norm(d->projections->rt_mass(), w2.coeffs - w.coeffs) <= 1e-10 * wnorm);

    // Round trip through P2 is not exact (RT1 is not a subspace of P2) but
    // must stay close for a smooth field.
    const SparseMatrix& g = d->projections->mixed_mass();
    BlockSystem sys({d->velocity->dof_count});
    sys.add_block(0, 0, 1.0, &d->projections->velocity_mass());
    sys.set_rhs(g.apply_transposed(w.coeffs));
    const Field lifted(d->velocity, solve(sys, 1e-12));
    const Field w3 = d->projections->rt_project(lifted);
    CHECK(m_norm(d->projections->rt_mass(), w3.coeffs - w.coeffs) <= 0.05 * wnorm);
}

TEST_CASE("rt: skew-symmetry of convection on projected fields") {
    auto d = disc_on(-1, 1, -1, 1, 3);
    const Field v = l2_project_p2(*d, [](double x, double y) {
        return Vec2{y * y - x, std::sin(2 * x)};
    });
    const Field w = d->projections->rt_project(v);
    const double wnorm = m_norm(d->projections->rt_mass(), w.coeffs);
    const SparseMatrix conv = assemble_convection(w, *d->velocity);
    const SparseMatrix stiff = assemble_stiffness(*d->velocity, 1.0);

    std::mt19937 rng(21);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd u(d->velocity->dof_count);
        for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);
        for (int i = 0; i < u.size(); ++i)
            if (d->velocity->dirichlet[i]) u[i] = 0.0;
        const double h1_sq = u.dot(d->projections->velocity_mass().apply(u)) + u.dot(stiff.apply(u));
        CHECK(std::fabs(u.dot(conv.apply(u))) <= 1e-12 * wnorm * h1_sq);
    }
}

TEST_CASE("rt: second-order projection error on a smooth divergence-free field") {
    // v = curl(sin x sin y) on (0,pi)^2 has zero normal trace and zero divergence.
    const VectorFn exact = [](double x, double y) {
        return Vec2{std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y)};
    };
    std::vector<double> errors, hs;
    for (int n : {8, 16, 32}) {
        auto d = disc_on(0, M_PI, 0, M_PI, n);
        const Field v = l2_project_p2(*d, exact);
        const Field w = d->projections->rt_project(v);
        errors.push_back(error_vs_analytic(w, exact));
        hs.push_back(d->mesh->h_max);
    }
    for (size_t i = 1; i < errors.size(); ++i) {
        const double rate = std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]);
        CHECK(rate > 1.7);
        CHECK(rate < 2.3);
    }
}
