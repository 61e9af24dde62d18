#pragma once

// Error norms, nested-mesh prolongation, EOC tables, and the temporal/spatial
// convergence studies.

#include "nsfem/stepper.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nsfem {

// A family of nested meshes, each level refined uniformly from the previous.
// Discretizations (with their cached factorizations) are built per call so a
// study only ever holds the levels it is actively using.
class MeshChain {
public:
    explicit MeshChain(Mesh coarsest);

    std::shared_ptr<const Mesh> mesh(int level);
    std::shared_ptr<Discretization> discretization(int level);

    // Ancestor of a fine cell `levels_up` levels above.
    int ancestor_cell(int fine_level, int cell, int levels_up) const;

    // Exact prolongation of a P2Vector field from a coarse level onto the given
    // velocity space of a finer level of this chain.
    Field prolong(const Field& coarse, int coarse_level,
                  std::shared_ptr<const FESpace> fine_space, int fine_level);

private:
    std::vector<std::shared_ptr<const Mesh>> meshes_;
};

// sqrt((a-b)^T M (a-b)) for fields on the same space.
double error_l2(const Field& a, const Field& b);
double error_l2(const Field& a, const Field& b, const SparseMatrix& mass);

// L2 distance computed by quadrature against an analytic function.
double error_vs_analytic(const Field& u, const VectorFn& exact);

struct EOCRow {
    double resolution = 0.0;  // tau (time axis) or h (space axis)
    double error = 0.0;
    double rate = 0.0;        // NaN on the first row
};

struct EOCTable {
    std::string axis;   // "time" | "space"
    std::string norm;   // e.g. "velocity L2"
    std::vector<EOCRow> rows;

    void write_csv(std::ostream& os) const;
    static EOCTable read_csv(std::istream& is, std::string axis = {}, std::string norm = {});
};

// rate_i = log(e_{i-1}/e_i) / log(r_{i-1}/r_i); first row NaN.
void fill_rates(EOCTable& table);

struct StudyConfig {
    double xmin = -M_PI, xmax = M_PI, ymin = -M_PI, ymax = M_PI;
    int mesh_n = 16;                  // temporal study mesh (nx = ny)
    std::vector<int> mesh_list;      // spatial study meshes; each entry doubles the previous
    double nu = 0.1;
    double T = 0.5;
    std::vector<double> taus;        // temporal study stepsizes
    double tau = 1.0 / 128.0;        // spatial study stepsize
    double tau_ref = 0.0;            // temporal reference stepsize
    int ref_refines = 1;             // extra refinements of the spatial reference
    double alpha = 0.76;
    VectorFn initial;
    ForcingFn forcing;               // optional (manufactured runs)
    bool convection = true;
};

// Runs the scheme for each tau against a tau_ref reference on the same mesh.
EOCTable convergence_time(const StudyConfig& cfg);

// Runs on each nested mesh with fixed tau, prolonging final states onto the
// reference mesh (ref_refines levels above the finest study mesh).
EOCTable convergence_space(const StudyConfig& cfg);

} // namespace nsfem
