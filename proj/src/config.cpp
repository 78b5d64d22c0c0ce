#include "rotolab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rotolab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double num(const ConfigMap& cfg, const std::string& key, bool& used_flag) {
    const std::string& v = cfg.at(key);
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    used_flag = true;
    return x;
}

bool boolean(const ConfigMap& cfg, const std::string& key) {
    const std::string& v = cfg.at(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

} // namespace

ConfigMap parse_config(const std::string& text) {
    ConfigMap out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments, honoring quoted strings
        bool quoted = false;
        std::string stripped;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            if (c == '#' && !quoted) break;
            stripped += c;
        }
        std::string t = trim(stripped);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
            val = val.substr(1, val.size() - 2);
        std::string full = section.empty() ? key : section + "." + key;
        if (out.count(full))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + full + "'");
        out[full] = val;
    }
    return out;
}

ConfigMap load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_config(const ConfigMap& cfg, pipeline::Params& p) {
    std::map<std::string, bool> used;
    for (const auto& [k, _] : cfg) used[k] = false;
    auto setd = [&](const std::string& k, double& dst) {
        if (cfg.count(k)) dst = num(cfg, k, used[k]);
    };
    auto seti = [&](const std::string& k, int& dst) {
        if (cfg.count(k)) dst = static_cast<int>(num(cfg, k, used[k]));
    };
    auto setl = [&](const std::string& k, long& dst) {
        if (cfg.count(k)) dst = static_cast<long>(num(cfg, k, used[k]));
    };
    auto setb = [&](const std::string& k, bool& dst) {
        if (cfg.count(k)) { dst = boolean(cfg, k); used[k] = true; }
    };

    setd("band.y_min", p.band.y_min);
    setd("band.y_max", p.band.y_max);
    setd("trap.y_min", p.trap.y_min);
    setd("trap.y_max", p.trap.y_max);
    seti("grid.depth", p.depth);
    seti("grid.depth_start", p.depth_start);
    setl("grid.max_boxes", p.max_boxes);
    setd("budget.c1_budget", p.c1_budget);
    setd("budget.f1_fraction", p.f1_fraction);
    setd("budget.connector_fraction", p.connector_fraction);
    setd("budget.bump_fraction", p.bump_fraction);
    setd("map.p0", p.p0);
    setd("map.p1", p.p1);
    setd("map.strip_width", p.strip_width);
    setd("map.lambda", p.lambda);
    setd("map.cq", p.cq);
    setd("connector.r1", p.r1);
    setd("connector.r2", p.r2);
    setd("connector.center_a", p.center_a);
    setd("connector.center_b", p.center_b);
    setd("connector.half_width", p.half_width);
    setl("rotation.n_orbit", p.n_orbit);
    seti("rotation.samples", p.rotation_samples);
    setd("rotation.delta", p.delta);
    setd("entropy.epsilon", p.epsilon_entropy);
    setl("entropy.n", p.entropy_n);
    seti("entropy.samples", p.entropy_samples);
    setl("verify.transport_horizon", p.transport_horizon);
    setb("verify.require_transport", p.require_transport);
    setl("verify.wandering_horizon", p.wandering_horizon);
    setl("verify.escape_horizon", p.escape_horizon);
    seti("verify.chain_depth", p.chain_depth);
    seti("verify.horseshoe_n_max", p.horseshoe_n_max);
    if (cfg.count("rng.seed")) {
        bool f = false;
        p.seed = static_cast<unsigned>(num(cfg, "rng.seed", f));
        used["rng.seed"] = true;
    }

    for (const auto& [k, ok] : used)
        if (!ok) throw ConfigError("unknown config key: " + k);
}

} // namespace rotolab
