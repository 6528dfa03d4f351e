#include "droplab/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "droplab/errors.hpp"

namespace droplab {

namespace {
std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

double parse_double(const std::string& tok, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (errno != 0 || end == tok.c_str() || *end != '\0')
        throw config_error(where + ": not a number: '" + tok + "'");
    return v;
}
}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw config_error("line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
        if (section.empty())
            throw config_error("line " + std::to_string(lineno) + ": key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw config_error("line " + std::to_string(lineno) + ": empty key");
        if (cfg.data_[section].count(key))
            throw config_error("line " + std::to_string(lineno) + ": duplicate key '" + key +
                               "' in [" + section + "]");
        cfg.data_[section][key] = {split_tokens(line.substr(eq + 1)), lineno};
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_string(os.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

const std::vector<std::string>& ConfigFile::tokens(const std::string& section,
                                                   const std::string& key) const {
    const auto s = data_.find(section);
    if (s == data_.end()) throw config_error("missing section [" + section + "]");
    const auto k = s->second.find(key);
    if (k == s->second.end())
        throw config_error("missing key '" + key + "' in section [" + section + "]");
    return k->second.toks;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    const auto& t = tokens(section, key);
    if (t.size() != 1)
        throw config_error("[" + section + "] " + key + ": expected a single value");
    return t[0];
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    return parse_double(get_string(section, key), "[" + section + "] " + key);
}

int ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const double v = get_double(section, key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw config_error("[" + section + "] " + key + ": expected an integer");
    return i;
}

std::uint64_t ConfigFile::get_u64(const std::string& section, const std::string& key) const {
    const std::string s = get_string(section, key);
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end == s.c_str() || *end != '\0')
        throw config_error("[" + section + "] " + key + ": expected an unsigned integer");
    return v;
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
    const auto& t = tokens(section, key);
    std::vector<double> out;
    out.reserve(t.size());
    for (const auto& tok : t) out.push_back(parse_double(tok, "[" + section + "] " + key));
    return out;
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

int ConfigFile::get_int_or(const std::string& section, const std::string& key,
                           int fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::string ConfigFile::canonical() const {
    std::ostringstream os;
    for (const auto& [section, entries] : data_) {
        os << "[" << section << "]\n";
        for (const auto& [key, entry] : entries) {
            os << key << " =";
            for (const auto& t : entry.toks) os << " " << t;
            os << "\n";
        }
    }
    return os.str();
}

ConfinementProfile profile_from_config(const ConfigFile& cfg) {
    ConfinementProfile p;
    const std::string kind = cfg.get_string("profile", "kind");
    if (kind == "quadratic") {
        p.kind = ProfileKind::quadratic;
        if (cfg.has("profile", "hessian")) {
            const auto h = cfg.get_doubles("profile", "hessian");
            if (h.size() == 3) {
                p.hessian = Mat3Sym::diagonal(h[0], h[1], h[2]);
            } else if (h.size() == 6) {  // upper triangle h11 h12 h13 h22 h23 h33
                p.hessian.a = {h[0], h[1], h[2], h[1], h[3], h[4], h[2], h[4], h[5]};
            } else {
                throw config_error("[profile] hessian: expected 3 (diagonal) or 6 (upper triangle) values");
            }
        }
    } else if (kind == "power_law") {
        p.kind = ProfileKind::power_law;
        p.rho1 = cfg.get_double("profile", "rho1");
        p.exponent = cfg.get_double("profile", "exponent");
    } else {
        throw config_error("[profile] kind: expected 'quadratic' or 'power_law'");
    }
    p.rho_max = cfg.get_double_or("profile", "rho_max", 1.0);
    if (cfg.has("profile", "density")) {
        const std::string d = cfg.get_string("profile", "density");
        if (d == "torus_sin") p.density = DensityMode::torus_sin;
        else if (d == "pure_local") p.density = DensityMode::pure_local;
        else throw config_error("[profile] density: expected 'torus_sin' or 'pure_local'");
    }
    p.validate();
    return p;
}

SweepPlan sweep_plan_from_config(const ConfigFile& cfg) {
    SweepPlan plan;
    plan.profile = profile_from_config(cfg);
    plan.eta_values = cfg.get_doubles("sweep", "eta_values");
    const std::string mode = cfg.get_string("sweep", "mode");
    if (mode == "fixed_delta_rule") plan.mode = DeltaMode::fixed_delta_rule;
    else if (mode == "optimize_delta") plan.mode = DeltaMode::optimize_delta;
    else throw config_error("[sweep] mode: expected 'fixed_delta_rule' or 'optimize_delta'");
    plan.masses = cfg.get_doubles("droplets", "masses");
    plan.restarts = cfg.get_int_or("sweep", "restarts", 32);
    plan.seed = cfg.has("run", "seed") ? cfg.get_u64("run", "seed") : 0;
    plan.quad_order = cfg.get_int_or("sweep", "quad_order", 16);
    plan.validate();
    return plan;
}

AnsatzSpec ansatz_spec_from_config(const ConfigFile& cfg) {
    AnsatzSpec spec;
    spec.profile = profile_from_config(cfg);
    spec.eta = cfg.get_double("ansatz", "eta");
    spec.delta = cfg.get_double("ansatz", "delta");
    spec.quad_order = cfg.get_int_or("ansatz", "quad_order", 16);
    spec.config.masses = cfg.get_doubles("droplets", "masses");
    const auto pos = cfg.get_doubles("droplets", "positions");
    if (pos.size() != 3 * spec.config.masses.size())
        throw config_error("[droplets] positions: expected 3 coordinates per mass");
    for (std::size_t i = 0; i < spec.config.masses.size(); ++i)
        spec.config.positions.push_back({pos[3 * i], pos[3 * i + 1], pos[3 * i + 2]});
    spec.validate();
    return spec;
}

MinimizeRequest minimize_request_from_config(const ConfigFile& cfg) {
    MinimizeRequest req;
    req.profile = profile_from_config(cfg);
    req.masses = cfg.get_doubles("droplets", "masses");
    if (req.masses.empty()) throw config_error("[droplets] masses: must be non-empty");
    for (double m : req.masses)
        if (!(m > 0.0)) throw config_error("[droplets] masses: must be positive");
    req.restarts = cfg.get_int_or("minimize", "restarts", 32);
    req.seed = cfg.has("run", "seed") ? cfg.get_u64("run", "seed") : 0;
    return req;
}

}  // namespace droplab
