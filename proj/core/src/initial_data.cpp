#include "nsfem/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace nsfem {

VectorFn initial_vortex_pair(double gamma, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("initial_vortex_pair: eps must lie in (0,1)");

    return [gamma, eps](double x, double y) {
        Vec2 u{0.0, 0.0};
        const double centers[2] = {-0.5, 0.5};
        for (double cx : centers) {
            const double dx = x - cx;
            const double r = std::max(std::hypot(dx, y), 1e-14);
            const double s = gamma / (2.0 * M_PI * std::pow(r, 2.0 - eps));
            u.x += -y * s;
            u.y += dx * s;
        }
        return u;
    };
}

VectorFn initial_shear() {
    return [](double, double y) { return y > 0.0 ? Vec2{10.0, 0.0} : Vec2{-10.0, 0.0}; };
}

} // namespace nsfem
