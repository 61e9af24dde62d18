#include "nsfem/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nsfem {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: bad numeric value for key '" + key + "': " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return i;
    } catch (...) {
        throw ConfigError("config: bad integer value for key '" + key + "': " + v);
    }
}

} // namespace

void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "domain.xmin") cfg.xmin = parse_double(key, value);
    else if (key == "domain.xmax") cfg.xmax = parse_double(key, value);
    else if (key == "domain.ymin") cfg.ymin = parse_double(key, value);
    else if (key == "domain.ymax") cfg.ymax = parse_double(key, value);
    else if (key == "mesh.n") {
        cfg.mesh_n.clear();
        for (const std::string& v : split_commas(value)) cfg.mesh_n.push_back(parse_int(key, v));
    } else if (key == "nu") cfg.nu = parse_double(key, value);
    else if (key == "T") cfg.T = parse_double(key, value);
    else if (key == "tau") {
        cfg.tau.clear();
        for (const std::string& v : split_commas(value)) cfg.tau.push_back(parse_double(key, v));
    } else if (key == "alpha") cfg.alpha = parse_double(key, value);
    else if (key == "init") cfg.init = value;
    else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "eps") cfg.eps = parse_double(key, value);
    else if (key == "ref.tau") cfg.ref_tau = parse_double(key, value);
    else if (key == "ref.refines") cfg.ref_refines = parse_int(key, value);
    else if (key == "out.dir") cfg.out_dir = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.xmax > cfg.xmin) || !(cfg.ymax > cfg.ymin))
        throw ConfigError("config: degenerate domain extents");
    if (cfg.mesh_n.empty()) throw ConfigError("config: mesh.n is empty");
    for (int n : cfg.mesh_n)
        if (n < 1) throw ConfigError("config: mesh.n entries must be positive");
    if (!(cfg.nu > 0.0)) throw ConfigError("config: nu must be positive");
    if (!(cfg.T > 0.0)) throw ConfigError("config: T must be positive");
    if (cfg.tau.empty()) throw ConfigError("config: tau is empty");
    for (double t : cfg.tau)
        if (!(t > 0.0) || !(t < cfg.T)) throw ConfigError("config: tau entries must lie in (0, T)");
    if (!(cfg.alpha >= 0.0) || !(cfg.alpha < 1.0)) throw ConfigError("config: alpha must lie in [0, 1)");
    if (cfg.init != "vortex-pair" && cfg.init != "shear" && cfg.init != "zero")
        throw ConfigError("config: unknown init '" + cfg.init + "'");
    if (!(cfg.eps > 0.0) || !(cfg.eps < 1.0)) throw ConfigError("config: eps must lie in (0, 1)");
    if (cfg.ref_refines < 1)
        throw ConfigError("config: ref.refines must be >= 1 (reference strictly finer than the study)");
    const double tau_min = *std::min_element(cfg.tau.begin(), cfg.tau.end());
    if (cfg.ref_tau > 0.0 && tau_min < 4.0 * cfg.ref_tau)
        throw ConfigError("config: ref.tau must satisfy min(tau) >= 4 * ref.tau");
}

std::string manifest_text(const RunConfig& cfg) {
    std::stringstream os;
    os << std::setprecision(17);
    os << "alpha = " << cfg.alpha << '\n';
    os << "domain.xmax = " << cfg.xmax << '\n';
    os << "domain.xmin = " << cfg.xmin << '\n';
    os << "domain.ymax = " << cfg.ymax << '\n';
    os << "domain.ymin = " << cfg.ymin << '\n';
    os << "eps = " << cfg.eps << '\n';
    os << "gamma = " << cfg.gamma << '\n';
    os << "init = " << cfg.init << '\n';
    os << "mesh.n = ";
    for (size_t i = 0; i < cfg.mesh_n.size(); ++i) os << (i ? "," : "") << cfg.mesh_n[i];
    os << '\n';
    os << "nu = " << cfg.nu << '\n';
    os << "out.dir = " << cfg.out_dir << '\n';
    os << "ref.refines = " << cfg.ref_refines << '\n';
    os << "ref.tau = " << cfg.ref_tau << '\n';
    os << "T = " << cfg.T << '\n';
    os << "tau = ";
    for (size_t i = 0; i < cfg.tau.size(); ++i) os << (i ? "," : "") << cfg.tau[i];
    os << '\n';
    return os.str();
}

VectorFn make_initial(const RunConfig& cfg) {
    if (cfg.init == "vortex-pair") return initial_vortex_pair(cfg.gamma, cfg.eps);
    if (cfg.init == "shear") return initial_shear();
    return [](double, double) { return Vec2{0.0, 0.0}; };
}

StudyConfig to_study_config(const RunConfig& cfg) {
    StudyConfig s;
    s.xmin = cfg.xmin;
    s.xmax = cfg.xmax;
    s.ymin = cfg.ymin;
    s.ymax = cfg.ymax;
    s.mesh_n = cfg.mesh_n.front();
    s.mesh_list = cfg.mesh_n;
    s.nu = cfg.nu;
    s.T = cfg.T;
    s.taus = cfg.tau;
    s.tau = cfg.tau.front();
    s.tau_ref = cfg.ref_tau > 0.0 ? cfg.ref_tau
                                  : 0.25 * *std::min_element(cfg.tau.begin(), cfg.tau.end());
    s.ref_refines = cfg.ref_refines;
    s.alpha = cfg.alpha;
    s.initial = make_initial(cfg);
    return s;
}

} // namespace nsfem
