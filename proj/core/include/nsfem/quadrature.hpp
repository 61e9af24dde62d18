#pragma once

// Symmetric positive-weight quadrature on the reference triangle
// {(x,y): x,y >= 0, x+y <= 1}. Weights sum to the reference area 1/2.
// All points are strictly interior, so integrands may jump across mesh lines.

#include "nsfem/geometry.hpp"

#include <vector>

namespace nsfem {

struct QuadratureRule {
    std::vector<Bary> points;
    std::vector<double> weights;
    int degree = 0;  // polynomial exactness
};

// Supported exactness degrees: 1..6. Throws std::invalid_argument otherwise.
const QuadratureRule& quadrature_rule(int degree);

// Gauss points on [0,1] (2- and 3-point), used for edge moments.
struct EdgeRule {
    std::vector<double> points;
    std::vector<double> weights;  // sum to 1
};
const EdgeRule& edge_gauss(int npoints);

} // namespace nsfem
