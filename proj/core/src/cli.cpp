#include "nsfem/cli.hpp"

#include "nsfem/convergence.hpp"
#include "nsfem/initial_data.hpp"
#include "nsfem/quadrature.hpp"
#include "nsfem/run_config.hpp"
#include "nsfem/stepper.hpp"
#include "nsfem/vtk_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

namespace nsfem {

namespace {

namespace fs = std::filesystem;

struct CliOverrides {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> keys;  // key, raw value
    std::vector<double> snapshot_times;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov) {
    cmd->add_option("--config", ov.config_path, "configuration file (key = value lines)");
    auto key = [&ov](const std::string& k) {
        return [&ov, k](const std::string& v) { ov.keys.emplace_back(k, v); };
    };
    cmd->add_option_function<std::string>("--nu", key("nu"), "viscosity");
    cmd->add_option_function<std::string>("--T", key("T"), "final time");
    cmd->add_option_function<std::string>("--tau", key("tau"), "stepsize (comma list for studies)");
    cmd->add_option_function<std::string>("--alpha", key("alpha"), "time-grading exponent in [0,1)");
    cmd->add_option_function<std::string>("--mesh-n", key("mesh.n"), "mesh subdivisions (comma list for studies)");
    cmd->add_option_function<std::string>("--init", key("init"), "initial datum: vortex-pair | shear | zero");
    cmd->add_option_function<std::string>("--gamma", key("gamma"), "vortex circulation");
    cmd->add_option_function<std::string>("--eps", key("eps"), "vortex regularization exponent offset");
    cmd->add_option_function<std::string>("--ref-tau", key("ref.tau"), "reference stepsize");
    cmd->add_option_function<std::string>("--ref-refines", key("ref.refines"), "extra refinements of the spatial reference");
    cmd->add_option_function<std::string>("--out-dir", key("out.dir"), "output directory");
}

RunConfig resolve_config(const CliOverrides& ov) {
    RunConfig cfg = ov.config_path.empty() ? RunConfig{} : parse_config_file(ov.config_path);
    for (const auto& [k, v] : ov.keys) apply_config_key(cfg, k, v);
    validate_config(cfg);
    return cfg;
}

void write_manifest_file(const RunConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    std::ofstream os(fs::path(cfg.out_dir) / "manifest.txt");
    os << manifest_text(cfg);
}

void print_table(const EOCTable& t) {
    std::cout << std::left << std::setw(14) << (t.axis == "time" ? "tau" : "h") << std::setw(16)
              << "error" << "rate\n";
    for (const EOCRow& r : t.rows) {
        std::cout << std::setw(14) << std::setprecision(6) << r.resolution << std::setw(16)
                  << std::scientific << r.error << std::defaultfloat;
        if (std::isnan(r.rate))
            std::cout << "-\n";
        else
            std::cout << std::setprecision(3) << r.rate << '\n';
    }
}

int cmd_run(const CliOverrides& ov, bool write_final_snapshot) {
    const RunConfig cfg = resolve_config(ov);
    write_manifest_file(cfg);

    auto mesh = std::make_shared<Mesh>(
        build_rect_mesh(cfg.xmin, cfg.xmax, cfg.ymin, cfg.ymax, cfg.mesh_n.front(), cfg.mesh_n.front()));
    auto disc = std::make_shared<Discretization>(mesh);
    NSStepper::Options opt;
    opt.nu = cfg.nu;
    NSStepper stepper(disc, opt);
    const TimeGrid grid = build_graded_grid(cfg.T, cfg.tau.front(), cfg.alpha);

    std::vector<double> pending = ov.snapshot_times;
    std::sort(pending.begin(), pending.end());
    size_t next_snap = 0;
    int snap_index = 0;

    const auto t0 = std::chrono::steady_clock::now();
    const SolverState final_state =
        stepper.run(grid, make_initial(cfg), [&](const SolverState& s) {
            while (next_snap < pending.size() && s.t >= pending[next_snap] - 1e-12) {
                const Field w = recover_vorticity(s.u_curr, disc->pressure);
                std::ostringstream name;
                name << "snapshot_" << std::setw(4) << std::setfill('0') << snap_index++ << ".vtk";
                write_snapshot_vtk_file(s.u_curr, w, (fs::path(cfg.out_dir) / name.str()).string());
                ++next_snap;
            }
        });
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ofstream diag(fs::path(cfg.out_dir) / "diagnostics.csv");
    diag << "t,tau,energy,dissipation,energy_slack,div_inf,stiff_error,wall_seconds\n"
         << std::setprecision(17);
    for (const StepDiagnostics& d : final_state.history)
        diag << d.t << ',' << d.tau << ',' << d.energy << ',' << d.dissipation << ','
             << d.energy_slack << ',' << d.div_inf << ',' << d.stiff_error << ','
             << d.wall_seconds << '\n';

    if (write_final_snapshot) {
        const Field w = recover_vorticity(final_state.u_curr, disc->pressure);
        write_snapshot_vtk_file(final_state.u_curr, w,
                                (fs::path(cfg.out_dir) / "final.vtk").string());
        write_mesh_vtk_file(*mesh, (fs::path(cfg.out_dir) / "mesh.vtk").string());
    }

    std::cout << "steps " << final_state.n << ", final energy "
              << final_state.history.back().energy << ", wall " << std::setprecision(3) << wall
              << " s\n";
    return 0;
}

int cmd_converge(const CliOverrides& ov, bool temporal) {
    const RunConfig cfg = resolve_config(ov);
    write_manifest_file(cfg);
    StudyConfig study = to_study_config(cfg);

    const EOCTable table = temporal ? convergence_time(study) : convergence_space(study);
    const std::string name = temporal ? "convergence_time.csv" : "convergence_space.csv";
    std::ofstream os(fs::path(cfg.out_dir) / name);
    table.write_csv(os);
    print_table(table);
    return 0;
}

// ---------------------------------------------------------------------------
// validate: runs the runtime-invariant suite on a tiny problem.
// ---------------------------------------------------------------------------

struct Validator {
    int failures = 0;
    void check(const std::string& name, bool ok) {
        std::cout << (ok ? "ok: " : "FAIL: ") << name << '\n';
        if (!ok) ++failures;
    }
};

int cmd_validate() {
    Validator v;

    // Mesh invariants.
    const Mesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 2, 2);
    const Mesh fine = refine_uniform(mesh);
    v.check("mesh: Euler formula V - E + C = 1",
            mesh.n_vertices() - mesh.n_edges() + mesh.n_cells() == 1 &&
                fine.n_vertices() - fine.n_edges() + fine.n_cells() == 1);
    v.check("mesh: cell areas sum to the domain area",
            std::fabs(mesh.total_area() - 1.0) < 1e-13 && std::fabs(fine.total_area() - 1.0) < 1e-13);
    bool ccw = true;
    for (int c = 0; c < fine.n_cells(); ++c) ccw = ccw && fine.signed_area(c) > 0.0;
    v.check("mesh: counterclockwise cells", ccw);
    v.check("mesh: h_max halves under refinement", std::fabs(fine.h_max - 0.5 * mesh.h_max) < 1e-15);

    // Quadrature exactness.
    bool quad_ok = true;
    for (int deg = 1; deg <= 6; ++deg) {
        const QuadratureRule& q = quadrature_rule(deg);
        for (int a = 0; a + 0 <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b) {
                double integral = 0.0;
                for (size_t g = 0; g < q.points.size(); ++g)
                    integral += q.weights[g] * std::pow(q.points[g][1], a) * std::pow(q.points[g][2], b);
                double exact = 1.0;  // a! b! / (a+b+2)!
                for (int k = 1; k <= a; ++k) exact *= k;
                for (int k = 1; k <= b; ++k) exact *= k;
                for (int k = 1; k <= a + b + 2; ++k) exact /= k;
                quad_ok = quad_ok && std::fabs(integral - exact) < 1e-14;
            }
    }
    v.check("quadrature: exact for declared degrees", quad_ok);

    // Tableau.
    const ButcherTableau tab = lobatto_iiic();
    v.check("tableau: row sums equal nodes",
            tab.a[0][0] + tab.a[0][1] == tab.c[0] && tab.a[1][0] + tab.a[1][1] == tab.c[1]);
    v.check("tableau: stiffly accurate", tab.a[1][0] == tab.b[0] && tab.a[1][1] == tab.b[1]);

    // Projections and the convection identity on a tiny vortex step.
    auto m2 = std::make_shared<Mesh>(build_rect_mesh(-M_PI, M_PI, -M_PI, M_PI, 4, 4));
    auto disc = std::make_shared<Discretization>(m2);
    NSStepper::Options opt;
    opt.nu = 0.1;
    NSStepper stepper(disc, opt);

    const auto u0 = initial_shear();
    SolverState state = stepper.initial_state(u0);
    const Field w = disc->projections->rt_project(state.u_curr);
    const double wnorm = m_norm(disc->projections->rt_mass(), w.coeffs);
    v.check("projection: advecting field exactly divergence free",
            disc->projections->rt_divergence_coefficients(w).lpNorm<Eigen::Infinity>() <=
                1e-11 * wnorm);

    const SparseMatrix conv = assemble_convection(w, *disc->velocity);
    std::mt19937 rng(7);
    std::normal_distribution<double> dist;
    bool skew_ok = true;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd u(disc->velocity->dof_count);
        for (int i = 0; i < u.size(); ++i) u[i] = dist(rng);
        for (int i = 0; i < u.size(); ++i)
            if (disc->velocity->dirichlet[i]) u[i] = 0.0;
        const double h1 = u.dot(disc->projections->velocity_mass().apply(u)) +
                          u.dot(stepper.unit_stiffness().apply(u));
        skew_ok = skew_ok && std::fabs(u.dot(conv.apply(u))) <= 1e-11 * wnorm * h1;
    }
    v.check("assembly: convection skew on divergence-free advecting fields", skew_ok);

    // Three steps: energy decay, stiff accuracy, discrete divergence.
    const TimeGrid grid = build_graded_grid(0.05, 0.05 / 3.0, 0.0);
    try {
        const SolverState out = stepper.run(grid, u0);
        bool decay = true;
        for (const StepDiagnostics& d : out.history)
            decay = decay && d.energy_slack <= 1e-9 * out.history.front().energy &&
                    d.stiff_error <= 1e-9 && d.div_inf <= 1e-9;
        v.check("stepper: energy decay, stiff accuracy, divergence bounds", decay);
    } catch (const std::exception& e) {
        v.check(std::string("stepper: run failed: ") + e.what(), false);
    }

    std::cout << (v.failures == 0 ? "all invariants green\n" : "invariant failures detected\n");
    return v.failures == 0 ? 0 : 1;
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"2D incompressible Navier-Stokes solver (Taylor-Hood elements, "
                 "divergence-free RT projection, two-stage IMEX Runge-Kutta, graded time grids)"};
    app.require_subcommand(1);

    CliOverrides ov;
    CLI::App* run = app.add_subcommand("run", "run one simulation, write diagnostics");
    add_common_options(run, ov);
    run->add_option("--snapshots", ov.snapshot_times, "times at which to write VTK snapshots")
        ->delimiter(',');

    CLI::App* ct = app.add_subcommand("converge-time", "temporal convergence study");
    add_common_options(ct, ov);
    CLI::App* cs = app.add_subcommand("converge-space", "spatial convergence study");
    add_common_options(cs, ov);

    app.add_subcommand("validate", "run the runtime-invariant suite on a tiny problem");

    CLI::App* ex = app.add_subcommand("export", "run and export VTK snapshots");
    add_common_options(ex, ov);
    ex->add_option("--snapshots", ov.snapshot_times, "times at which to write VTK snapshots")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (run->parsed()) return cmd_run(ov, false);
        if (ct->parsed()) return cmd_converge(ov, true);
        if (cs->parsed()) return cmd_converge(ov, false);
        if (ex->parsed()) return cmd_run(ov, true);
        return cmd_validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace nsfem
