#include "nsfem/convergence.hpp"
#include "nsfem/initial_data.hpp"
#include "nsfem/stepper.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace nsfem;

namespace {

std::shared_ptr<const Discretization> tiny_disc() {
    static auto d = std::make_shared<Discretization>(
        std::make_shared<Mesh>(build_rect_mesh(-1, 1, -1, 1, 2, 2)));
    return d;
}

Field random_divfree_field(const Discretization& d, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    Eigen::VectorXd load(d.velocity->dof_count);
    for (int i = 0; i < load.size(); ++i) load[i] = dist(rng);
    auto [u, lambda] = d.projections->leray_project(load);
    return u;
}

// Dense basis of the discretely divergence-free subspace (free velocity dofs
// with B u = 0), columns embedded into full dof vectors.
Eigen::MatrixXd divfree_basis(const Discretization& d) {
    const int nv = d.velocity->dof_count;
    std::vector<int> free_dofs;
    for (int i = 0; i < nv; ++i)
        if (!d.velocity->dirichlet[i]) free_dofs.push_back(i);
    const int nf = static_cast<int>(free_dofs.size());

    const Eigen::MatrixXd bfull = d.projections->divergence().to_dense();
    Eigen::MatrixXd bfree(bfull.rows(), nf);
    for (int j = 0; j < nf; ++j) bfree.col(j) = bfull.col(free_dofs[j]);

    const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(bfree).kernel();
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(nv, kernel.cols());
    for (int j = 0; j < nf; ++j) z.row(free_dofs[j]) = kernel.row(j);
    return z;
}

} // namespace

TEST_CASE("step: zero state with zero forcing is an exact fixed point") {
    auto d = tiny_disc();
    NSStepper stepper(d, {});
    SolverState s = stepper.initial_state(Field::zero(d->velocity));
    const TimeGrid grid = build_graded_grid(1.0, 0.25, 0.0);
    stepper.step(s, grid);
    stepper.step(s, grid);
    CHECK(s.u_curr.coeffs.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(s.stage_u[0].coeffs.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("step: dense oracle checks the energy inequality and the explicit-projection form") {
    auto d = tiny_disc();
    NSStepper::Options opt;
    opt.nu = 0.1;
    NSStepper stepper(d, opt);

    SolverState s = stepper.initial_state(random_divfree_field(*d, 31));
    const Field u0 = s.u_curr;
    TimeGrid grid;
    grid.levels = {0.0, 0.05};
    grid.tau_max = 0.05;
    const double tau = 0.05;

    stepper.step(s, grid);

    // Explicit-projection oracle: the same stage equations posed on a dense
    // basis of the divergence-free subspace, with every term projected by
    // testing against that basis.
    const Eigen::MatrixXd z = divfree_basis(*d);
    const int m = static_cast<int>(z.cols());
    const Eigen::MatrixXd mass = d->projections->velocity_mass().to_dense();
    const Eigen::MatrixXd stiff = assemble_stiffness(*d->velocity, 1.0).to_dense();

    const ButcherTableau tab = lobatto_iiic();
    Eigen::MatrixXd conv[2];
    for (int i = 0; i < 2; ++i) {
        const Field adv = extrapolate(s.u_prev, s.u_prev, 0.0, tau, tab.c[i], 0);  // n = 0 branch
        conv[i] = assemble_convection(d->projections->rt_project(adv), *d->velocity).to_dense();
    }

    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    Eigen::VectorXd rhs(2 * m);
    const Eigen::MatrixXd zmz = z.transpose() * mass * z;
    for (int i = 0; i < 2; ++i) {
        rhs.segment(i * m, m) = z.transpose() * mass * u0.coeffs;
        sys.block(i * m, i * m, m, m) += zmz;
        for (int j = 0; j < 2; ++j)
            sys.block(i * m, j * m, m, m) +=
                tau * tab.a[i][j] * (opt.nu * z.transpose() * stiff * z + z.transpose() * conv[j] * z);
    }
    const Eigen::VectorXd y = sys.partialPivLu().solve(rhs);

    for (int i = 0; i < 2; ++i) {
        const Eigen::VectorXd dense_stage = z * y.segment(i * m, m);
        const double scale = std::max(1.0, dense_stage.norm());
        CHECK((dense_stage - s.stage_u[i].coeffs).norm() <= 1e-10 * scale);
    }

    // Energy inequality evaluated with dense arithmetic.
    const double e0 = u0.coeffs.dot(mass * u0.coeffs);
    const double e1 = s.u_curr.coeffs.dot(mass * s.u_curr.coeffs);
    double dissipation = 0.0;
    for (int i = 0; i < 2; ++i)
        dissipation += tab.b[i] * s.stage_u[i].coeffs.dot(stiff * s.stage_u[i].coeffs);
    const double slack = e0 - 2.0 * opt.nu * tau * dissipation - e1;
    CHECK(slack >= -1e-9 * e0);
}

TEST_CASE("step: stiff accuracy and discrete divergence hold along a run") {
    auto d = tiny_disc();
    NSStepper::Options opt;
    opt.nu = 0.1;
    NSStepper stepper(d, opt);
    const TimeGrid grid = build_graded_grid(0.4, 0.1, 0.76);
    const SolverState out = stepper.run(grid, initial_shear());
    REQUIRE(out.history.size() == static_cast<size_t>(grid.n_steps()));
    const double e0 = 400.0 * 4.0;  // ||u0||^2 numerically bounded by the datum norm
    for (const StepDiagnostics& diag : out.history) {
        CHECK(diag.stiff_error <= 1e-9);
        CHECK(diag.div_inf <= 1e-9);
        CHECK(diag.energy_slack <= 1e-9 * e0);
        CHECK(diag.skew <= 1e-11);
    }
    // Energy decays monotonically with no forcing.
    for (size_t i = 1; i < out.history.size(); ++i)
        CHECK(out.history[i].energy <= out.history[i - 1].energy * (1.0 + 1e-12));
}

TEST_CASE("step: the Stokes sub-problem is a linear map of the state") {
    auto d = tiny_disc();
    NSStepper::Options opt;
    opt.nu = 0.3;
    opt.convection = false;
    NSStepper stepper(d, opt);
    const TimeGrid grid = build_graded_grid(0.1, 0.05, 0.0);

    const Field ua = random_divfree_field(*d, 1);
    const Field ub = random_divfree_field(*d, 2);
    const double a = 1.7, b = -0.4;

    auto advance = [&](Field u0) {
        SolverState s = stepper.initial_state(std::move(u0));
        stepper.step(s, grid);
        return s.u_curr.coeffs;
    };
    const Eigen::VectorXd xa = advance(ua);
    const Eigen::VectorXd xb = advance(ub);
    Field combo = ua;
    combo.coeffs = a * ua.coeffs + b * ub.coeffs;
    const Eigen::VectorXd xc = advance(combo);
    CHECK((xc - a * xa - b * xb).norm() <= 1e-10 * xc.norm());
}

TEST_CASE("run: alpha = 0 grid reproduces a hand-built uniform grid exactly") {
    auto d = tiny_disc();
    NSStepper::Options opt;
    opt.nu = 0.1;
    NSStepper stepper(d, opt);

    const TimeGrid graded = build_graded_grid(1.0, 0.25, 0.0);
    TimeGrid manual;
    manual.levels = {0.0, 0.25, 0.5, 0.75, 1.0};
    manual.tau_max = 0.25;
    REQUIRE(graded.levels.size() == manual.levels.size());
    for (size_t i = 0; i < manual.levels.size(); ++i) CHECK(graded.levels[i] == manual.levels[i]);

    const auto u0 = initial_vortex_pair(2.0 * M_PI, 0.1);
    const SolverState a = stepper.run(graded, u0);
    const SolverState b = stepper.run(manual, u0);
    CHECK((a.u_curr.coeffs - b.u_curr.coeffs).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("run: manufactured Stokes solution converges at second order in time") {
    // u = g(t) curl(sin^2 x sin^2 y) on (0,pi)^2 vanishes on the boundary;
    // f = g' U - nu g lap(U) makes it an exact Stokes solution with p = 0.
    const double nu = 0.7;
    auto gfun = [](double t) { return std::exp(-t); };
    auto ufun = [&](double x, double y, double t) {
        const double sx = std::sin(x), sy = std::sin(y);
        return Vec2{gfun(t) * sx * sx * 2.0 * sy * std::cos(y),
                    -gfun(t) * 2.0 * sx * std::cos(x) * sy * sy};
    };
    const ForcingFn forcing = [&](double x, double y, double t) {
        const double s2x = std::sin(2 * x), s2y = std::sin(2 * y);
        const double sx = std::sin(x), sy = std::sin(y);
        const Vec2 u{sx * sx * s2y, -s2x * sy * sy};
        const Vec2 lap{2.0 * std::cos(2 * x) * s2y - 4.0 * sx * sx * s2y,
                       4.0 * s2x * sy * sy - 2.0 * s2x * std::cos(2 * y)};
        const double g = gfun(t), gp = -gfun(t);
        return Vec2{gp * u.x - nu * g * lap.x, gp * u.y - nu * g * lap.y};
    };

    StudyConfig cfg;
    cfg.xmin = 0;
    cfg.xmax = M_PI;
    cfg.ymin = 0;
    cfg.ymax = M_PI;
    cfg.mesh_n = 8;
    cfg.nu = nu;
    cfg.T = 0.5;
    cfg.taus = {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0};
    cfg.tau_ref = 1.0 / 256.0;
    cfg.alpha = 0.0;
    cfg.convection = false;
    cfg.forcing = forcing;
    cfg.initial = [&](double x, double y) { return ufun(x, y, 0.0); };

    const EOCTable table = convergence_time(cfg);
    REQUIRE(table.rows.size() == 3);
    for (size_t i = 1; i < table.rows.size(); ++i) {
        CHECK(table.rows[i].rate > 1.8);
        CHECK(table.rows[i].rate < 2.2);
        // tau halving cuts the error by about 4.
        const double ratio = table.rows[i - 1].error / table.rows[i].error;
        CHECK(ratio > 3.2);
        CHECK(ratio < 4.8);
    }
}

TEST_CASE("initial_state: rejects fields from another space") {
    auto d = tiny_disc();
    NSStepper stepper(d, {});
    const Field wrong = Field::zero(d->pressure);
    CHECK_THROWS_AS(stepper.initial_state(wrong), std::invalid_argument);
}
