#pragma once

// Flat key-value experiment configuration; unknown keys are errors.

#include "nsfem/convergence.hpp"
#include "nsfem/initial_data.hpp"

#include <string>
#include <vector>

namespace nsfem {

struct RunConfig {
    double xmin = -M_PI, xmax = M_PI, ymin = -M_PI, ymax = M_PI;
    std::vector<int> mesh_n = {16};          // mesh.n (list for spatial studies)
    double nu = 0.1;
    double T = 0.5;
    std::vector<double> tau = {1.0 / 32.0};  // tau (list for temporal studies)
    double alpha = 0.76;
    std::string init = "vortex-pair";        // vortex-pair | shear | zero
    double gamma = 2.0 * M_PI;
    double eps = 0.1;
    double ref_tau = 0.0;                    // 0: defaults to min(tau)/4
    int ref_refines = 1;
    std::string out_dir = "out";
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Applies "key = value"; throws ConfigError naming any unknown key or bad value.
void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Lines of "key = value"; '#' starts a comment.
RunConfig parse_config_file(const std::string& path);

void validate_config(const RunConfig& cfg);

// Resolved configuration echo, one sorted "key = value" per line.
std::string manifest_text(const RunConfig& cfg);

VectorFn make_initial(const RunConfig& cfg);

StudyConfig to_study_config(const RunConfig& cfg);

} // namespace nsfem
