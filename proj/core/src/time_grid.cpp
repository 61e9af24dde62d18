#include "nsfem/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace nsfem {

namespace {

// Keeps N <= 4 T/tau for strong grading: the uncapped level count grows like
// T/((1-alpha) c tau), so c must absorb 1/(1-alpha) once it exceeds ~4. The
// consecutive-ratio cap below limits the early growth, so c itself may pass 3.
double grading_constant(double alpha) {
    return std::max(1.0, 1.35 / (4.0 * (1.0 - alpha)));
}

constexpr double kRatioCap = 2.9;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

TimeGrid build_graded_grid(double T, double tau, double alpha) {
    if (!(T > 0.0)) throw std::invalid_argument("build_graded_grid: T must be positive");
    if (!(tau > 0.0) || !(tau < T)) throw std::invalid_argument("build_graded_grid: need 0 < tau < T");
    if (!(alpha >= 0.0) || !(alpha < 1.0)) throw std::invalid_argument("build_graded_grid: need 0 <= alpha < 1");

    TimeGrid g;
    g.alpha = alpha;
    g.tau_max = tau;
    g.levels.push_back(0.0);

    if (alpha == 0.0) {
        // Uniform grid; land exactly on T.
        const int n = std::max(1, static_cast<int>(std::llround(T / tau)));
        const double step = (std::fabs(n * tau - T) <= 1e-12 * T) ? T / n : tau;
        double t = 0.0;
        while (true) {
            const double remaining = T - t;
            if (remaining <= step * (1.0 + 1e-9)) {
                g.levels.push_back(T);
                break;
            }
            t += step;
            g.levels.push_back(t);
        }
        return g;
    }

    const double c = grading_constant(alpha);
    double t = T * std::pow(tau / T, 1.0 / (1.0 - alpha));
    double prev_tau = t;
    g.levels.push_back(t);

    while (t < T) {
        double step = std::min(c * std::pow(t / T, alpha) * tau, kRatioCap * prev_tau);
        const double remaining = T - t;
        if (remaining <= step * (1.0 + 1e-9)) {
            g.levels.push_back(T);
            break;
        }
        t += step;
        prev_tau = step;
        g.levels.push_back(t);
    }
    return g;
}

ButcherTableau lobatto_iiic() {
    ButcherTableau t;
    t.a = {{{0.5, -0.5}, {0.5, 0.5}}};
    t.b = {0.5, 0.5};
    t.c = {0.0, 1.0};
    return t;
}

Field extrapolate(const Field& u_prev, const Field& u_curr, double tau_n, double tau_np1,
                  double c_i, int n) {
    if (n == 0) return u_curr;
    if (u_prev.space.get() != u_curr.space.get())
        throw std::invalid_argument("extrapolate: fields on different spaces");
    if (!(tau_n > 0.0)) throw std::invalid_argument("extrapolate: tau_n must be positive for n >= 1");

    const double r = c_i * tau_np1 / tau_n;
    Field out = u_curr;
    out.coeffs = (1.0 + r) * u_curr.coeffs - r * u_prev.coeffs;
    return out;
}

QuadratureDefect quadrature_defect(const ButcherTableau& tab, const std::function<double(double)>& phi,
                                   double t_n, double t_np1) {
    const double tau = t_np1 - t_n;
    const double tol = 1e-12 * std::max(1.0, std::fabs(tau));
    const double phi_at[2] = {phi(t_n + tab.c[0] * tau), phi(t_n + tab.c[1] * tau)};

    QuadratureDefect d{};
    for (int i = 0; i < 2; ++i) {
        double quad = 0.0;
        for (int j = 0; j < 2; ++j) quad += tab.a[i][j] * phi_at[j];
        d.stage[i] = integrate(phi, t_n, t_n + tab.c[i] * tau, tol) - tau * quad;
    }
    double quad = 0.0;
    for (int i = 0; i < 2; ++i) quad += tab.b[i] * phi_at[i];
    d.endpoint = integrate(phi, t_n, t_np1, tol) - tau * quad;
    return d;
}

} // namespace nsfem
