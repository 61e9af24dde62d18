#include "nsfem/convergence.hpp"

#include "nsfem/quadrature.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nsfem {

MeshChain::MeshChain(Mesh coarsest) {
    meshes_.push_back(std::make_shared<Mesh>(std::move(coarsest)));
}

std::shared_ptr<const Mesh> MeshChain::mesh(int level) {
    while (static_cast<int>(meshes_.size()) <= level)
        meshes_.push_back(std::make_shared<Mesh>(refine_uniform(*meshes_.back())));
    return meshes_[level];
}

std::shared_ptr<Discretization> MeshChain::discretization(int level) {
    return std::make_shared<Discretization>(mesh(level));
}

int MeshChain::ancestor_cell(int fine_level, int cell, int levels_up) const {
    int c = cell;
    for (int l = 0; l < levels_up; ++l) c = meshes_[fine_level - l]->parent[c];
    return c;
}

Field MeshChain::prolong(const Field& coarse, int coarse_level,
                         std::shared_ptr<const FESpace> fine_space, int fine_level) {
    if (coarse_level > fine_level)
        throw std::invalid_argument("prolong: coarse level above fine level");
    mesh(fine_level);
    if (coarse.space->mesh.get() != meshes_[coarse_level].get())
        throw std::invalid_argument("prolong: field not on the chain's mesh at that level");
    if (fine_space->mesh.get() != meshes_[fine_level].get() || fine_space->kind != SpaceKind::P2Vector)
        throw std::invalid_argument("prolong: target space not on the chain's fine level");
    if (coarse_level == fine_level) return coarse;

    const Mesh& fm = *meshes_[fine_level];
    const Mesh& cm = *meshes_[coarse_level];

    // Any fine cell per node; coinciding evaluations agree by continuity.
    const int n_nodes = fm.n_vertices() + fm.n_edges();
    std::vector<int> node_cell(n_nodes, -1);
    std::array<int, 6> nodes;
    for (int c = 0; c < fm.n_cells(); ++c) {
        cell_nodes_p2(fm, c, nodes);
        for (int k = 0; k < 6; ++k) node_cell[nodes[k]] = c;
    }

    Eigen::VectorXd coeffs(fine_space->dof_count);
    for (int node = 0; node < n_nodes; ++node) {
        const Vec2 p = node < fm.n_vertices()
                           ? fm.vertices[node]
                           : (fm.vertices[fm.edges[node - fm.n_vertices()].v0] +
                              fm.vertices[fm.edges[node - fm.n_vertices()].v1]) *
                                 0.5;
        const int cc = ancestor_cell(fine_level, node_cell[node], fine_level - coarse_level);
        const Vec2 v = coarse.eval_vector(cc, cm.barycentric(cc, p));
        coeffs[2 * node] = v.x;
        coeffs[2 * node + 1] = v.y;
    }
    return Field(fine_space, std::move(coeffs), coarse.time);
}

double error_l2(const Field& a, const Field& b) {
    if (a.space.get() != b.space.get())
        throw std::invalid_argument("error_l2: fields on different spaces");
    return error_l2(a, b, assemble_mass(*a.space));
}

double error_l2(const Field& a, const Field& b, const SparseMatrix& mass) {
    if (a.space.get() != b.space.get())
        throw std::invalid_argument("error_l2: fields on different spaces");
    const Eigen::VectorXd d = a.coeffs - b.coeffs;
    return m_norm(mass, d);
}

double error_vs_analytic(const Field& u, const VectorFn& exact) {
    const Mesh& m = *u.space->mesh;
    const QuadratureRule& q = quadrature_rule(6);
    double err2 = 0.0;
    for (int c = 0; c < m.n_cells(); ++c) {
        const double jac = m.jacobian(c).det();
        for (size_t g = 0; g < q.points.size(); ++g) {
            const Vec2 p = m.point(c, q.points[g]);
            const Vec2 d = u.eval_vector(c, q.points[g]) - exact(p.x, p.y);
            err2 += q.weights[g] * jac * d.dot(d);
        }
    }
    return std::sqrt(err2);
}

void EOCTable::write_csv(std::ostream& os) const {
    os << "resolution,error,rate\n";
    os << std::setprecision(17);
    for (const EOCRow& r : rows) {
        os << r.resolution << ',' << r.error << ',';
        if (!std::isnan(r.rate)) os << r.rate;
        os << '\n';
    }
}

EOCTable EOCTable::read_csv(std::istream& is, std::string axis, std::string norm) {
    EOCTable t;
    t.axis = std::move(axis);
    t.norm = std::move(norm);
    std::string line;
    if (!std::getline(is, line) || line != "resolution,error,rate")
        throw std::invalid_argument("EOCTable::read_csv: missing header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        EOCRow r;
        std::getline(ss, field, ',');
        r.resolution = std::stod(field);
        std::getline(ss, field, ',');
        r.error = std::stod(field);
        std::getline(ss, field, ',');
        r.rate = field.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(field);
        t.rows.push_back(r);
    }
    return t;
}

void fill_rates(EOCTable& table) {
    for (size_t i = 0; i < table.rows.size(); ++i) {
        if (i == 0) {
            table.rows[i].rate = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const EOCRow& prev = table.rows[i - 1];
        EOCRow& cur = table.rows[i];
        cur.rate = std::log(prev.error / cur.error) / std::log(prev.resolution / cur.resolution);
    }
}

namespace {

NSStepper::Options stepper_options(const StudyConfig& cfg) {
    NSStepper::Options opt;
    opt.nu = cfg.nu;
    opt.convection = cfg.convection;
    opt.forcing = cfg.forcing;
    return opt;
}

} // namespace

EOCTable convergence_time(const StudyConfig& cfg) {
    if (cfg.taus.empty()) throw std::invalid_argument("convergence_time: no stepsizes");
    if (!(cfg.tau_ref > 0.0)) throw std::invalid_argument("convergence_time: reference stepsize missing");
    for (double tau : cfg.taus)
        if (tau < 4.0 * cfg.tau_ref)
            throw std::invalid_argument("convergence_time: study stepsizes must be >= 4x the reference");
    if (!cfg.initial) throw std::invalid_argument("convergence_time: initial datum missing");

    auto mesh = std::make_shared<Mesh>(build_rect_mesh(cfg.xmin, cfg.xmax, cfg.ymin, cfg.ymax,
                                                       cfg.mesh_n, cfg.mesh_n));
    auto disc = std::make_shared<Discretization>(mesh);
    NSStepper stepper(disc, stepper_options(cfg));
    const SparseMatrix& mass = disc->projections->velocity_mass();

    const SolverState ref = stepper.run(build_graded_grid(cfg.T, cfg.tau_ref, cfg.alpha), cfg.initial);

    EOCTable table;
    table.axis = "time";
    table.norm = "velocity L2";
    for (double tau : cfg.taus) {
        const SolverState s = stepper.run(build_graded_grid(cfg.T, tau, cfg.alpha), cfg.initial);
        table.rows.push_back({tau, error_l2(s.u_curr, ref.u_curr, mass), 0.0});
    }
    fill_rates(table);
    return table;
}

EOCTable convergence_space(const StudyConfig& cfg) {
    if (cfg.mesh_list.empty()) throw std::invalid_argument("convergence_space: no meshes");
    for (size_t i = 1; i < cfg.mesh_list.size(); ++i)
        if (cfg.mesh_list[i] != 2 * cfg.mesh_list[i - 1])
            throw std::invalid_argument("convergence_space: mesh list must double at each entry");
    if (cfg.ref_refines < 1)
        throw std::invalid_argument("convergence_space: reference must be strictly finer than the study meshes");
    if (!cfg.initial) throw std::invalid_argument("convergence_space: initial datum missing");

    MeshChain chain(build_rect_mesh(cfg.xmin, cfg.xmax, cfg.ymin, cfg.ymax, cfg.mesh_list[0],
                                    cfg.mesh_list[0]));
    const int n_study = static_cast<int>(cfg.mesh_list.size());
    const int ref_level = n_study - 1 + cfg.ref_refines;

    const TimeGrid grid = build_graded_grid(cfg.T, cfg.tau, cfg.alpha);
    auto ref_disc = chain.discretization(ref_level);
    const SolverState ref = NSStepper(ref_disc, stepper_options(cfg)).run(grid, cfg.initial);
    const SparseMatrix ref_mass = assemble_mass(*ref_disc->velocity);

    EOCTable table;
    table.axis = "space";
    table.norm = "velocity L2";
    for (int l = 0; l < n_study; ++l) {
        // Built fresh and dropped after the run: only one study level's
        // factorizations are resident besides the reference.
        auto disc = chain.discretization(l);
        const SolverState s = NSStepper(disc, stepper_options(cfg)).run(grid, cfg.initial);
        const Field on_ref = chain.prolong(s.u_curr, l, ref_disc->velocity, ref_level);
        table.rows.push_back({disc->mesh->h_max, error_l2(on_ref, ref.u_curr, ref_mass), 0.0});
    }
    fill_rates(table);
    return table;
}

} // namespace nsfem
