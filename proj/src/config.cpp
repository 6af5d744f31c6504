#include "spectral_circle/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sc {

using nlohmann::json;

ConfigError::ConfigError(int line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// net count of open brackets outside JSON strings
int bracket_balance(const std::string& s) {
    int depth = 0;
    bool in_str = false, esc = false;
    for (char ch : s) {
        if (in_str) {
            if (esc) esc = false;
            else if (ch == '\\') esc = true;
            else if (ch == '"') in_str = false;
            continue;
        }
        if (ch == '"') in_str = true;
        else if (ch == '[' || ch == '{') ++depth;
        else if (ch == ']' || ch == '}') --depth;
    }
    return depth;
}

struct Entry {
    json value;
    int line;
};

using Section = std::map<std::string, Entry>;

double get_real(const Entry& e, const std::string& key) {
    if (!e.value.is_number()) throw ConfigError(e.line, key + " must be a number");
    return e.value.get<double>();
}

long get_int(const Entry& e, const std::string& key) {
    if (!e.value.is_number_integer()) throw ConfigError(e.line, key + " must be an integer");
    return e.value.get<long>();
}

void check_keys(const Section& s, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, e] : s)
        if (!allowed.count(k)) throw ConfigError(e.line, "unknown key '" + k + "' in [" + where + "]");
}

PeriodicFunction parse_theta(const json& j, int line) {
    if (!j.is_object()) throw ConfigError(line, "each theta entry must be an object {mean, harmonics}");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "mean" && it.key() != "harmonics")
            throw ConfigError(line, "unknown theta field '" + it.key() + "'");
    if (!j.contains("mean") || !j["mean"].is_number()) throw ConfigError(line, "theta entry needs a numeric mean");
    std::vector<Harmonic> hs;
    if (j.contains("harmonics")) {
        if (!j["harmonics"].is_array()) throw ConfigError(line, "harmonics must be a list of [m, cos, sin]");
        for (const auto& h : j["harmonics"]) {
            if (!h.is_array() || h.size() != 3 || !h[0].is_number_integer() || !h[1].is_number() || !h[2].is_number())
                throw ConfigError(line, "harmonic must be [m, cos, sin] with integer m");
            hs.push_back({h[0].get<int>(), h[1].get<double>(), h[2].get<double>()});
        }
    }
    try {
        return PeriodicFunction(j["mean"].get<double>(), std::move(hs));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(line, e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, Section> sections;
    std::vector<std::pair<std::string, int>> order;  // section name, header line
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            if (current.empty()) throw ConfigError(lineno, "empty section name");
            if (sections.count(current)) throw ConfigError(lineno, "duplicate section [" + current + "]");
            sections[current];
            order.emplace_back(current, lineno);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
        if (current.empty()) throw ConfigError(lineno, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(lineno, "empty key");
        const int start = lineno;
        while (bracket_balance(value) > 0 && std::getline(in, raw)) {
            ++lineno;
            value += "\n" + raw;
        }
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error& e) {
            throw ConfigError(start, "value of '" + key + "' is not a JSON literal");
        }
        auto& sec = sections[current];
        if (sec.count(key)) throw ConfigError(start, "duplicate key '" + key + "'");
        sec[key] = {std::move(parsed), start};
    }

    RunConfig cfg;
    bool have_connection = false;
    for (const auto& [name, header_line] : order) {
        const Section& s = sections[name];
        if (name == "connection") {
            check_keys(s, {"theta", "n"}, name);
            if (!s.count("theta")) throw ConfigError(header_line, "[connection] needs theta");
            const Entry& t = s.at("theta");
            if (!t.value.is_array() || t.value.empty()) throw ConfigError(t.line, "theta must be a non-empty list");
            std::vector<PeriodicFunction> th;
            for (const auto& e : t.value) th.push_back(parse_theta(e, t.line));
            if (s.count("n") && get_int(s.at("n"), "n") != static_cast<long>(th.size()))
                throw ConfigError(s.at("n").line, "n does not match the number of theta entries");
            cfg.connection = ConnectionSpec(std::move(th));
            have_connection = true;
        } else if (name == "tolerance") {
            check_keys(s, {"holonomy", "phase", "modulus", "k_max"}, name);
            if (s.count("holonomy")) cfg.tol.holonomy = get_real(s.at("holonomy"), "holonomy");
            if (s.count("phase")) cfg.tol.phase = get_real(s.at("phase"), "phase");
            if (s.count("modulus")) cfg.tol.modulus = get_real(s.at("modulus"), "modulus");
            if (s.count("k_max")) cfg.tol.k_max = static_cast<int>(get_int(s.at("k_max"), "k_max"));
            try {
                cfg.tol.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(header_line, e.what());
            }
        } else if (name == "optimizer") {
            check_keys(s, {"grid_n", "refine_tol", "grid2d_n", "cross_check"}, name);
            if (s.count("grid_n")) cfg.optimizer.grid_n = static_cast<int>(get_int(s.at("grid_n"), "grid_n"));
            if (s.count("refine_tol")) cfg.optimizer.refine_tol = get_real(s.at("refine_tol"), "refine_tol");
            if (s.count("grid2d_n")) cfg.optimizer.grid2d_n = static_cast<int>(get_int(s.at("grid2d_n"), "grid2d_n"));
            if (s.count("cross_check")) {
                if (!s.at("cross_check").value.is_boolean()) throw ConfigError(s.at("cross_check").line, "cross_check must be a boolean");
                cfg.optimizer.cross_check = s.at("cross_check").value.get<bool>();
            }
            try {
                cfg.optimizer.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(header_line, e.what());
            }
        } else if (name == "oracle") {
            check_keys(s, {"N", "restarts", "iters", "seed", "stages", "temp_start", "temp_end", "p_max"}, name);
            auto& o = cfg.oracle;
            if (s.count("N")) o.N = static_cast<int>(get_int(s.at("N"), "N"));
            if (s.count("restarts")) o.restarts = static_cast<int>(get_int(s.at("restarts"), "restarts"));
            if (s.count("iters")) o.iters = static_cast<int>(get_int(s.at("iters"), "iters"));
            if (s.count("seed")) {
                const long sd = get_int(s.at("seed"), "seed");
                if (sd < 0) throw ConfigError(s.at("seed").line, "seed must be non-negative");
                o.seed = static_cast<std::uint64_t>(sd);
            }
            if (s.count("stages")) o.stages = static_cast<int>(get_int(s.at("stages"), "stages"));
            if (s.count("temp_start")) o.temp_start = get_real(s.at("temp_start"), "temp_start");
            if (s.count("temp_end")) o.temp_end = get_real(s.at("temp_end"), "temp_end");
            if (s.count("p_max")) o.p_max = static_cast<int>(get_int(s.at("p_max"), "p_max"));
            try {
                o.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError(header_line, e.what());
            }
        } else if (name.rfind("query.", 0) == 0) {
            QuerySpec q;
            q.name = name.substr(6);
            q.line = header_line;
            if (q.name.empty() || q.name.find_first_of("/\\ \t") != std::string::npos || q.name[0] == '.')
                throw ConfigError(header_line, "query name must be non-empty and usable as a file name");
            if (!s.count("kind") || !s.at("kind").value.is_string())
                throw ConfigError(header_line, "query needs kind = \"...\"");
            q.kind = s.at("kind").value.get<std::string>();
            static const std::map<std::string, std::set<std::string>> keys = {
                {"distance", {"xi", "zeta"}},
                {"classify", {"xi", "zeta"}},
                {"oracle", {"xi", "zeta", "N", "restarts", "iters", "seed"}},
                {"profile-fiber", {"xi", "k_min", "k_max", "phi_count"}},
                {"profile-torus", {"xi", "k", "phi", "tau0_count"}},
            };
            const auto it = keys.find(q.kind);
            if (it == keys.end()) throw ConfigError(s.at("kind").line, "unknown query kind '" + q.kind + "'");
            q.params = json::object();
            for (const auto& [k, e] : s) {
                if (k == "kind") continue;
                if (!it->second.count(k)) throw ConfigError(e.line, "unknown key '" + k + "' for kind " + q.kind);
                q.params[k] = e.value;
            }
            if (!q.params.contains("xi")) throw ConfigError(header_line, "query needs xi");
            cfg.queries.push_back(std::move(q));
        } else {
            throw ConfigError(header_line, "unknown section [" + name + "]");
        }
    }
    if (!have_connection) throw ConfigError(lineno, "missing [connection] section");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

PureState parse_state(const json& j, std::size_t n) {
    if (!j.is_object()) throw std::invalid_argument("state must be an object");
    const double base = j.value("base", 0.0);
    if (j.contains("ray")) {
        const auto& r = j["ray"];
        if (!r.is_array() || r.size() != n) throw std::invalid_argument("ray must list " + std::to_string(n) + " components");
        Ray v;
        for (const auto& c : r) {
            if (c.is_number()) v.emplace_back(c.get<double>(), 0.0);
            else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number())
                v.emplace_back(c[0].get<double>(), c[1].get<double>());
            else throw std::invalid_argument("ray component must be a number or [re, im]");
        }
        return PureState(base, std::move(v));
    }
    if (j.contains("bloch")) {
        if (n != 2) throw std::invalid_argument("bloch form needs n = 2");
        const auto& b = j["bloch"];
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            throw std::invalid_argument("bloch must be [z, azimuth]");
        return PureState::from_bloch(base, b[0].get<double>(), b[1].get<double>());
    }
    throw std::invalid_argument("state needs ray or bloch");
}

PureState parse_target(const json& j, const ConnectionSpec& spec, const PureState& xi) {
    if (j.is_object() && j.contains("coords")) {
        const auto& c = j["coords"];
        TorusCoords tc;
        tc.k = c.value("k", 0L);
        tc.tau0 = c.value("tau0", 0.0);
        tc.phi.assign(spec.n(), 0.0);
        if (c.contains("phi")) {
            const auto& p = c["phi"];
            if (!p.is_array() || p.size() + 1 != spec.n())
                throw std::invalid_argument("coords.phi must list n-1 phases");
            for (std::size_t i = 0; i < p.size(); ++i) tc.phi[i + 1] = p[i].get<double>();
        }
        return state_from_coords(spec, xi, tc);
    }
    return parse_state(j, spec.n());
}

}  // namespace sc
