#include "nsfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nsfem {

namespace {

void push_orbit3(QuadratureRule& r, double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.points.push_back({b, a, a});
    r.points.push_back({a, b, a});
    r.points.push_back({a, a, b});
    for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

void push_orbit6(QuadratureRule& r, double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.points.push_back({c, a, b});
    r.points.push_back({c, b, a});
    r.points.push_back({a, c, b});
    r.points.push_back({b, c, a});
    r.points.push_back({a, b, c});
    r.points.push_back({b, a, c});
    for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

void normalize(QuadratureRule& r) {
    double s = 0.0;
    for (double w : r.weights) s += w;
    const double f = 0.5 / s;
    for (double& w : r.weights) w *= f;
}

QuadratureRule make_rule(int degree) {
    QuadratureRule r;
    r.degree = degree;
    switch (degree) {
        case 1:
            r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(0.5);
            break;
        case 2:
            push_orbit3(r, 1.0 / 6.0, 1.0 / 6.0);
            break;
        case 3:
        case 4:
            // Dunavant degree 4, two 3-orbits.
            push_orbit3(r, 0.445948490915965, 0.111690794839005);
            push_orbit3(r, 0.091576213509771, 0.054975871827661);
            r.degree = 4;
            break;
        case 5: {
            // Dunavant degree 5: centroid plus two 3-orbits (closed forms).
            const double s15 = std::sqrt(15.0);
            r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
            r.weights.push_back(0.5 * 9.0 / 40.0);
            push_orbit3(r, (6.0 - s15) / 21.0, 0.5 * (155.0 - s15) / 1200.0);
            push_orbit3(r, (6.0 + s15) / 21.0, 0.5 * (155.0 + s15) / 1200.0);
            break;
        }
        case 6:
            // Dunavant degree 6, two 3-orbits and one 6-orbit.
            push_orbit3(r, 0.063089014491502, 0.5 * 0.050844906370207);
            push_orbit3(r, 0.249286745170910, 0.5 * 0.116786275726379);
            push_orbit6(r, 0.310352451033785, 0.053145049844816, 0.5 * 0.082851075618374);
            break;
        default:
            throw std::invalid_argument("quadrature_rule: degree must be in 1..6");
    }
    normalize(r);
    return r;
}

} // namespace

const QuadratureRule& quadrature_rule(int degree) {
    if (degree < 1 || degree > 6)
        throw std::invalid_argument("quadrature_rule: degree must be in 1..6");
    static const QuadratureRule rules[6] = {make_rule(1), make_rule(2), make_rule(3),
                                            make_rule(4), make_rule(5), make_rule(6)};
    return rules[degree - 1];
}

const EdgeRule& edge_gauss(int npoints) {
    static const EdgeRule g2 = [] {
        EdgeRule r;
        const double d = 0.5 / std::sqrt(3.0);
        r.points = {0.5 - d, 0.5 + d};
        r.weights = {0.5, 0.5};
        return r;
    }();
    static const EdgeRule g3 = [] {
        EdgeRule r;
        const double d = 0.5 * std::sqrt(3.0 / 5.0);
        r.points = {0.5 - d, 0.5, 0.5 + d};
        r.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        return r;
    }();
    if (npoints == 2) return g2;
    if (npoints == 3) return g3;
    throw std::invalid_argument("edge_gauss: only 2- and 3-point rules");
}

} // namespace nsfem
