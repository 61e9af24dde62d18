#include "nsfem/initial_data.hpp"
#include "nsfem/stepper.hpp"
#include "nsfem/vtk_io.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace nsfem;

namespace {

// Strict local maxima of a P1 field over the vertex adjacency graph, ignoring
// vertices below the floor.
int count_local_maxima(const Field& w, double floor) {
    const Mesh& m = *w.space->mesh;
    std::vector<std::vector<int>> neighbors(m.n_vertices());
    for (const Edge& e : m.edges) {
        neighbors[e.v0].push_back(e.v1);
        neighbors[e.v1].push_back(e.v0);
    }
    int count = 0;
    for (int v = 0; v < m.n_vertices(); ++v) {
        if (w.coeffs[v] < floor) continue;
        bool is_max = true;
        for (int nb : neighbors[v]) is_max = is_max && w.coeffs[v] > w.coeffs[nb];
        if (is_max) ++count;
    }
    return count;
}

} // namespace

TEST_CASE("vortex pair merges into a single vortex by t = 2" * doctest::timeout(600)) {
    auto mesh = std::make_shared<Mesh>(build_rect_mesh(-M_PI, M_PI, -M_PI, M_PI, 20, 20));
    auto disc = std::make_shared<Discretization>(mesh);
    NSStepper::Options opt;
    opt.nu = 0.1;
    NSStepper stepper(disc, opt);

    const TimeGrid grid = build_graded_grid(2.0, 1.0 / 24.0, 0.76);
    int maxima_early = -1;
    const SolverState final_state =
        stepper.run(grid, initial_vortex_pair(2.0 * M_PI, 0.1), [&](const SolverState& s) {
            if (maxima_early < 0 && s.t >= 0.1) {
                const Field w = recover_vorticity(s.u_curr, disc->pressure);
                maxima_early = count_local_maxima(w, 0.3 * w.coeffs.maxCoeff());
            }
        });

    // Two distinct co-rotating vortices early on; one merged vortex at the end.
    CHECK(maxima_early == 2);
    const Field w = recover_vorticity(final_state.u_curr, disc->pressure);
    CHECK(count_local_maxima(w, 0.3 * w.coeffs.maxCoeff()) == 1);
    // The merged core is sign consistent: the global maximum dominates and the
    // field dips far below it only away from the core.
    CHECK(w.coeffs.maxCoeff() > 0.0);
}
