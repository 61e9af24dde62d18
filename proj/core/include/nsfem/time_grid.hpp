#pragma once

// Graded time grids concentrating steps near t = 0, the two-stage Lobatto IIIC
// tableau, the extrapolation operator for the advecting velocity, and the
// quadrature-defect functionals used as order-condition oracles.

#include "nsfem/fe_space.hpp"

#include <array>
#include <functional>
#include <vector>

namespace nsfem {

struct TimeGrid {
    std::vector<double> levels;  // t_0 = 0 < ... < t_N = T
    double alpha = 0.0;
    double tau_max = 0.0;        // nominal maximal stepsize

    int n_steps() const { return static_cast<int>(levels.size()) - 1; }
    double t(int n) const { return levels[n]; }
    // Stepsize tau_n = t_n - t_{n-1}, 1-indexed.
    double tau(int n) const { return levels[n] - levels[n - 1]; }
    double final_time() const { return levels.back(); }
};

// Stepsizes tau_1 = T (tau/T)^{1/(1-alpha)}, then
// tau_n = min(c_alpha (t_{n-1}/T)^alpha tau, rho tau_{n-1}, T - t_{n-1}),
// landing exactly on T. The grading constant c_alpha >= 1 and the growth cap
// rho keep the level count below 4T/tau and consecutive ratios below 3 for
// every alpha < 1 (only the clipped final step is exempt from the ratio bound).
TimeGrid build_graded_grid(double T, double tau, double alpha);

struct ButcherTableau {
    std::array<std::array<double, 2>, 2> a;
    std::array<double, 2> b;
    std::array<double, 2> c;
};

// Two-stage Lobatto IIIC: stiffly accurate (a_2j = b_j), algebraically stable,
// order 2.
ButcherTableau lobatto_iiic();

// Advecting-velocity extrapolation: u_curr for n = 0, otherwise
// u_curr + c_i (tau_np1 / tau_n)(u_curr - u_prev).
Field extrapolate(const Field& u_prev, const Field& u_curr, double tau_n, double tau_np1,
                  double c_i, int n);

// Quadrature error functionals of the tableau on [t_n, t_np1]: the two stage
// defects and the endpoint defect. The integrals are evaluated by adaptive
// Simpson quadrature to 1e-12 (test oracle only).
struct QuadratureDefect {
    double stage[2];
    double endpoint;
};
QuadratureDefect quadrature_defect(const ButcherTableau& tab, const std::function<double(double)>& phi,
                                   double t_n, double t_np1);

} // namespace nsfem
