#pragma once

// Initial velocity fields of the experiments: a pair of co-rotating vortices
// with an algebraically modified core (L2 but not H^eps), and a piecewise
// constant shear (L2 but not H^{1/2}).

#include "nsfem/fe_space.hpp"

#include <functional>

namespace nsfem {

// u0 = u1 + u2 with centers (-1/2, 0) and (1/2, 0),
// u_k = Gamma/(2 pi r_k^{2-eps}) * (-y, x - x_k). Evaluations closer than
// 1e-14 to a center are clamped to that radius.
VectorFn initial_vortex_pair(double gamma, double eps);

// (10, 0) for y > 0 and (-10, 0) for y < 0; the value on y = 0 is immaterial
// (interior-point quadrature never samples it on aligned meshes).
VectorFn initial_shear();

} // namespace nsfem
