#include "nsfem/time_grid.hpp"

#include <doctest.h>

#include <cmath>

using namespace nsfem;

TEST_CASE("graded grid: alpha = 0 degenerates to the uniform grid") {
    const TimeGrid g = build_graded_grid(1.0, 0.25, 0.0);
    CHECK(g.n_steps() == 4);
    for (int n = 1; n <= g.n_steps(); ++n) CHECK(g.tau(n) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.t(0) == 0.0);
    CHECK(g.final_time() == 1.0);
}

TEST_CASE("graded grid: first step is tau^(1/(1-alpha))") {
    const TimeGrid g = build_graded_grid(1.0, 0.25, 0.5);
    CHECK(g.tau(1) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));

    // T-rescaled form: tau_1/T = (tau/T)^(1/(1-alpha)).
    const TimeGrid g2 = build_graded_grid(2.0, 0.5, 0.5);
    CHECK(g2.tau(1) == doctest::Approx(2.0 * std::pow(0.25, 2.0)).epsilon(1e-14));
}

TEST_CASE("graded grid: level count and ratio bound at alpha = 0.76") {
    const TimeGrid g = build_graded_grid(1.0, 1.0 / 32.0, 0.76);
    CHECK(g.n_steps() <= 4 * 32);
    for (int n = 2; n < g.n_steps(); ++n) {
        const double ratio = g.tau(n) / g.tau(n - 1);
        CHECK(ratio <= 3.0);
        CHECK(ratio >= 1.0 / 3.0);
    }
}

TEST_CASE("graded grid: invalid parameters") {
    CHECK_THROWS_AS(build_graded_grid(0.0, 0.1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_graded_grid(1.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_graded_grid(1.0, 2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_graded_grid(1.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_graded_grid(1.0, 0.1, -0.1), std::invalid_argument);
}

TEST_CASE("graded grid: property sweep over alpha and tau") {
    for (double alpha : {0.0, 0.3, 0.5, 0.76, 0.9}) {
        for (int k = 3; k <= 8; ++k) {
            const double tau = std::pow(2.0, -k);
            for (double T : {1.0, 0.5}) {
                const TimeGrid g = build_graded_grid(T, tau, alpha);
                CHECK(g.t(0) == 0.0);
                CHECK(g.final_time() == T);
                for (int n = 1; n <= g.n_steps(); ++n) CHECK(g.tau(n) > 0.0);
                // Consecutive equivalence, final clipped step exempt.
                for (int n = 2; n < g.n_steps(); ++n) {
                    CHECK(g.tau(n) / g.tau(n - 1) <= 3.0);
                    CHECK(g.tau(n) / g.tau(n - 1) >= 1.0 / 3.0);
                }
                // O(T/tau) levels with constant at most 4.
                CHECK(g.n_steps() <= static_cast<int>(std::ceil(4.0 * T / tau)));
            }
        }
    }
}

TEST_CASE("tableau: exact coefficients and structural identities") {
    const ButcherTableau t = lobatto_iiic();
    CHECK(t.a[0][0] == 0.5);
    CHECK(t.a[0][1] == -0.5);
    CHECK(t.a[1][0] == 0.5);
    CHECK(t.a[1][1] == 0.5);
    CHECK(t.b[0] == 0.5);
    CHECK(t.b[1] == 0.5);
    CHECK(t.c[0] == 0.0);
    CHECK(t.c[1] == 1.0);

    // Row sums match the nodes; the last row matches the weights (stiff accuracy).
    CHECK(t.a[0][0] + t.a[0][1] == t.c[0]);
    CHECK(t.a[1][0] + t.a[1][1] == t.c[1]);
    CHECK(t.a[1][0] == t.b[0]);
    CHECK(t.a[1][1] == t.b[1]);
}

TEST_CASE("tableau: algebraic stability matrix is positive semidefinite") {
    const ButcherTableau t = lobatto_iiic();
    double d[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            d[i][j] = t.b[i] * t.a[i][j] + t.b[j] * t.a[j][i] - t.b[i] * t.b[j];

    CHECK(d[0][0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d[0][1] == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(d[1][0] == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(d[1][1] == doctest::Approx(0.25).epsilon(1e-15));

    // Closed-form symmetric 2x2 eigenvalues.
    const double mean = 0.5 * (d[0][0] + d[1][1]);
    const double disc = std::sqrt(0.25 * (d[0][0] - d[1][1]) * (d[0][0] - d[1][1]) + d[0][1] * d[0][1]);
    const double lo = mean - disc, hi = mean + disc;
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tableau: weight quadrature is exact for linear functions") {
    const ButcherTableau t = lobatto_iiic();
    // phi(s) = s on [0,1]: integral 1/2.
    const double quad = t.b[0] * t.c[0] + t.b[1] * t.c[1];
    CHECK(quad == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("extrapolation: startup branch, constants, affine exactness") {
    auto mesh = std::make_shared<Mesh>(build_rect_mesh(0, 1, 0, 1, 2, 2));
    auto space = build_space(mesh, SpaceKind::P2Vector);

    Eigen::VectorXd a(space->dof_count), b(space->dof_count);
    for (int i = 0; i < a.size(); ++i) {
        a[i] = std::sin(0.1 * i);
        b[i] = std::cos(0.2 * i);
    }
    const Field ua(space, a), ub(space, b);

    // n = 0: returns the current field for any nodes.
    const Field e0 = extrapolate(ua, ub, 0.0, 0.1, 1.0, 0);
    CHECK((e0.coeffs - ub.coeffs).lpNorm<Eigen::Infinity>() == 0.0);

    // Constant sequence is a fixed point.
    const Field ec = extrapolate(ub, ub, 0.2, 0.37, 1.0, 3);
    CHECK((ec.coeffs - ub.coeffs).lpNorm<Eigen::Infinity>() <= 1e-15);

    // Linear-in-time coefficients extrapolate exactly to the stage nodes.
    const double t_nm1 = 0.3, tau_n = 0.2, tau_np1 = 0.15;
    const double t_n = t_nm1 + tau_n;
    auto linear_at = [&](double t) {
        Eigen::VectorXd c = a + t * (b - a);
        return Field(space, c);
    };
    for (double ci : {0.0, 1.0, 0.5}) {
        const Field ex = extrapolate(linear_at(t_nm1), linear_at(t_n), tau_n, tau_np1, ci, 4);
        const Field want = linear_at(t_n + ci * tau_np1);
        CHECK((ex.coeffs - want.coeffs).lpNorm<Eigen::Infinity>() <= 1e-13);
    }

    auto other = build_space(mesh, SpaceKind::P1);
    const Field wrong(other, Eigen::VectorXd::Zero(other->dof_count));
    CHECK_THROWS_AS(extrapolate(wrong, ub, 0.1, 0.1, 1.0, 2), std::invalid_argument);
}

TEST_CASE("quadrature defects: exactness and scaling orders") {
    const ButcherTableau tab = lobatto_iiic();

    // Constants: all three defects vanish (row sums equal the nodes).
    const QuadratureDefect dc = quadrature_defect(tab, [](double) { return 2.5; }, 0.2, 0.7);
    CHECK(std::fabs(dc.stage[0]) <= 1e-14);
    CHECK(std::fabs(dc.stage[1]) <= 1e-14);
    CHECK(std::fabs(dc.endpoint) <= 1e-14);

    // Linear: the endpoint (trapezoidal) defect vanishes; stage defects are O(tau^2).
    auto lin = [](double t) { return 3.0 * t - 1.0; };
    const QuadratureDefect d1 = quadrature_defect(tab, lin, 0.1, 0.1 + 0.2);
    const QuadratureDefect d2 = quadrature_defect(tab, lin, 0.1, 0.1 + 0.1);
    CHECK(std::fabs(d1.endpoint) <= 1e-13);
    CHECK(std::fabs(d2.endpoint) <= 1e-13);
    CHECK(d1.stage[0] / d2.stage[0] == doctest::Approx(4.0).epsilon(0.01));

    // Quadratic: endpoint defect scales as tau^3 (ratio 8 within 1%).
    auto quad = [](double t) { return t * t; };
    const QuadratureDefect q1 = quadrature_defect(tab, quad, 0.3, 0.3 + 0.2);
    const QuadratureDefect q2 = quadrature_defect(tab, quad, 0.3, 0.3 + 0.1);
    CHECK(q1.endpoint / q2.endpoint == doctest::Approx(8.0).epsilon(0.01));
}
