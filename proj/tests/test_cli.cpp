#include "nsfem/cli.hpp"
#include "nsfem/convergence.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

using namespace nsfem;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"nsfem"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "nsfem_cli_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli: validate completes green on the tiny problem") {
    CHECK(run_cli({"validate"}) == 0);
}

TEST_CASE("cli: unknown subcommand fails with usage") {
    CHECK(run_cli({"frobnicate"}) != 0);
    CHECK(run_cli({}) != 0);
}

TEST_CASE("cli: converge-time writes a CSV with a rate column") {
    TempDir tmp;
    const int rc = run_cli({"converge-time", "--init", "shear", "--mesh-n", "4", "--T", "0.25",
                            "--tau", "0.0625,0.03125", "--ref-tau", "0.0078125", "--alpha", "0.76",
                            "--out-dir", tmp.path.string()});
    REQUIRE(rc == 0);

    std::ifstream is(tmp.path / "convergence_time.csv");
    REQUIRE(is.good());
    const EOCTable table = EOCTable::read_csv(is, "time", "velocity L2");
    REQUIRE(table.rows.size() == 2);
    CHECK(std::isnan(table.rows[0].rate));
    CHECK(!std::isnan(table.rows[1].rate));
    CHECK(table.rows[0].error > 0.0);

    std::ifstream manifest(tmp.path / "manifest.txt");
    REQUIRE(manifest.good());
    std::string text((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
    CHECK(text.find("init = shear") != std::string::npos);
    CHECK(text.find("alpha = 0.76") != std::string::npos);
}

TEST_CASE("cli: run writes diagnostics and export writes snapshots") {
    TempDir tmp;
    const int rc = run_cli({"run", "--init", "vortex-pair", "--mesh-n", "4", "--T", "0.1", "--tau",
                            "0.025", "--out-dir", tmp.path.string()});
    REQUIRE(rc == 0);
    CHECK(fs::exists(tmp.path / "diagnostics.csv"));
    CHECK(fs::exists(tmp.path / "manifest.txt"));

    const int rc2 = run_cli({"export", "--init", "vortex-pair", "--mesh-n", "4", "--T", "0.05",
                             "--tau", "0.025", "--snapshots", "0.025", "--out-dir", tmp.path.string()});
    REQUIRE(rc2 == 0);
    CHECK(fs::exists(tmp.path / "final.vtk"));
    CHECK(fs::exists(tmp.path / "mesh.vtk"));
    CHECK(fs::exists(tmp.path / "snapshot_0000.vtk"));
}

TEST_CASE("cli: malformed config is a usage error naming the key") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "bad.cfg";
    {
        std::ofstream os(cfg);
        os << "viscosity = 0.1\n";
    }
    CHECK(run_cli({"run", "--config", cfg.string()}) != 0);
}
