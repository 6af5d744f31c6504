#include "spectral_circle/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "spectral_circle/witness.hpp"

namespace sc {

using nlohmann::ordered_json;
using nlohmann::json;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

namespace {

void emit(const ordered_json& j, int indent, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case ordered_json::value_t::number_float: out += format_number(j.get<double>()); return;
        case ordered_json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += std::string(",") + nl;
                first = false;
                out += pad + ordered_json(it.key()).dump() + (indent > 0 ? ": " : ":");
                emit(it.value(), indent, depth + 1, out);
            }
            out += nl + close_pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            out += "[";
            out += nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += std::string(",") + nl;
                out += pad;
                emit(j[i], indent, depth + 1, out);
            }
            out += nl + close_pad + "]";
            return;
        }
        default: out += j.dump(); return;
    }
}

}  // namespace

std::string dump_json(const ordered_json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    return out;
}

std::uint64_t query_seed(std::uint64_t run_seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return run_seed ^ (h + 0x9E3779B97F4A7C15ULL + (run_seed << 6) + (run_seed >> 2));
}

namespace {

// JSON numbers cannot hold infinities; they are written as the string "inf"
ordered_json num(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

ordered_json distance_json(const DistanceResult& d) {
    ordered_json j;
    j["value"] = num(d.value);
    j["branch"] = to_string(d.branch);
    if (d.argmax) j["argmax"] = {num(d.argmax->T), num(d.argmax->Delta)};
    else j["argmax"] = nullptr;
    j["ill_conditioned"] = d.ill_conditioned;
    j["used_fallback"] = d.used_fallback;
    return j;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += ',';
        s += cells[i];
    }
    return s + "\n";
}

long get_long(const json& p, const char* key, long dflt) {
    if (!p.contains(key)) return dflt;
    if (!p[key].is_number_integer()) throw std::invalid_argument(std::string(key) + " must be an integer");
    return p[key].get<long>();
}

double get_double(const json& p, const char* key, double dflt) {
    if (!p.contains(key)) return dflt;
    if (!p[key].is_number()) throw std::invalid_argument(std::string(key) + " must be a number");
    return p[key].get<double>();
}

std::string run_profile_fiber(const RunConfig& cfg, const PureState& xi, const json& p) {
    const auto& spec = cfg.connection;
    if (spec.n() != 2) throw std::invalid_argument("profile-fiber needs n = 2");
    const long kmin = get_long(p, "k_min", 0), kmax = get_long(p, "k_max", 3);
    const long count = get_long(p, "phi_count", 64);
    if (kmin > kmax || count < 1 || count > 1000000) throw std::invalid_argument("profile-fiber: bad k range or phi_count");
    const auto hol = holonomy_summary(spec, cfg.tol.holonomy);
    const double omega = hol.omega[1], R = to_bloch(xi).R;
    std::string out = "k,phi,d_spectral,d_horizontal,d_chord\n";
    for (long k = kmin; k <= kmax; ++k)
        for (long i = 0; i < count; ++i) {
            const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
            const PureState zeta = state_from_coords(spec, xi, TorusCoords{k, 0.0, {0.0, phi}});
            const double ds = spectral_distance(spec, xi, zeta, cfg.tol, cfg.optimizer).value;
            const double dh = horizontal_distance(spec, xi, zeta, cfg.tol).value;
            const double chord = 2.0 * R * std::abs(std::sin(0.5 * (kTwoPi * static_cast<double>(k) * omega + phi)));
            out += csv_line({std::to_string(k), format_number(phi), format_number(ds), format_number(dh),
                             format_number(chord)});
        }
    return out;
}

std::string run_profile_torus(const RunConfig& cfg, const PureState& xi, const json& p) {
    const auto& spec = cfg.connection;
    if (spec.n() != 2) throw std::invalid_argument("profile-torus needs n = 2");
    const long k = get_long(p, "k", 0), count = get_long(p, "tau0_count", 64);
    const double phi = get_double(p, "phi", 0.0);
    if (count < 1 || count > 1000000) throw std::invalid_argument("profile-torus: bad tau0_count");
    std::string out = "k,phi,tau0,d_spectral,d_horizontal,branch,T,Delta\n";
    for (long i = 0; i < count; ++i) {
        const double tau0 = kTwoPi * static_cast<double>(i) / static_cast<double>(count);
        const PureState zeta = state_from_coords(spec, xi, TorusCoords{k, tau0, {0.0, phi}});
        const auto d = spectral_distance(spec, xi, zeta, cfg.tol, cfg.optimizer);
        const double dh = horizontal_distance(spec, xi, zeta, cfg.tol).value;
        const double T = d.argmax ? d.argmax->T : 0.0, D = d.argmax ? d.argmax->Delta : 0.0;
        out += csv_line({std::to_string(k), format_number(phi), format_number(tau0), format_number(d.value),
                         format_number(dh), to_string(d.branch), format_number(T), format_number(D)});
    }
    return out;
}

}  // namespace

QueryOutput run_query(const RunConfig& cfg, const QuerySpec& q, std::uint64_t run_seed) {
    QueryOutput out;
    out.name = q.name;
    out.kind = q.kind;
    out.extension = (q.kind.rfind("profile-", 0) == 0) ? "csv" : "json";
    try {
        const auto& spec = cfg.connection;
        const PureState xi = parse_state(q.params.at("xi"), spec.n());
        if (out.extension == "csv") {
            out.content = q.kind == "profile-fiber" ? run_profile_fiber(cfg, xi, q.params)
                                                    : run_profile_torus(cfg, xi, q.params);
            return out;
        }
        if (!q.params.contains("zeta")) throw std::invalid_argument("query needs zeta");
        const PureState zeta = parse_target(q.params.at("zeta"), spec, xi);
        ordered_json rec;
        rec["name"] = q.name;
        rec["kind"] = q.kind;
        const Relation rel = classify(spec, xi, zeta, cfg.tol);
        rec["relation"] = to_string(rel.tag);
        rec["witness_k"] = rel.witness_k ? ordered_json(*rel.witness_k) : ordered_json(nullptr);
        if (q.kind == "distance") {
            rec["spectral"] = distance_json(spectral_distance(spec, xi, zeta, cfg.tol, cfg.optimizer));
            rec["horizontal"] = num(horizontal_distance(spec, xi, zeta, cfg.tol).value);
        } else if (q.kind == "oracle") {
            OracleOptions o = cfg.oracle;
            o.tol = cfg.tol;
            o.N = static_cast<int>(get_long(q.params, "N", o.N));
            o.restarts = static_cast<int>(get_long(q.params, "restarts", o.restarts));
            o.iters = static_cast<int>(get_long(q.params, "iters", o.iters));
            o.seed = q.params.contains("seed") ? static_cast<std::uint64_t>(get_long(q.params, "seed", 0))
                                               : query_seed(run_seed, q.name);
            const OracleReport r = oracle_distance(spec, xi, zeta, o);
            ordered_json jr;
            jr["best_value"] = num(r.best_value);
            jr["comm_norm"] = num(r.comm_norm);
            jr["cd_comm_norm"] = num(r.cd_comm_norm);
            jr["cd_value"] = num(r.cd_value);
            jr["slack"] = num(r.slack);
            jr["snap_offset"] = num(r.snap_offset);
            jr["iterations"] = r.iterations;
            jr["restarts"] = r.restarts;
            jr["converged"] = r.converged;
            jr["diverges"] = r.diverges;
            rec["N"] = o.N;
            rec["seed"] = o.seed;
            rec["report"] = jr;
            try {
                rec["closed_form"] = num(spectral_distance(spec, xi, zeta, cfg.tol, cfg.optimizer).value);
            } catch (const std::domain_error&) {
                rec["closed_form"] = nullptr;
            }
        }
        out.content = dump_json(rec, 2) + "\n";
        validate_record(json::parse(out.content));
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
        ordered_json rec;
        rec["name"] = q.name;
        rec["kind"] = q.kind;
        rec["error"] = out.error;
        out.extension = "json";
        out.content = dump_json(rec, 2) + "\n";
    }
    return out;
}

void validate_record(const json& rec) {
    auto need = [&](const char* k) {
        if (!rec.contains(k)) throw std::runtime_error(std::string("record lacks '") + k + "'");
    };
    auto real_or_inf = [](const json& v) {
        return v.is_number() || (v.is_string() && (v == "inf" || v == "-inf"));
    };
    need("name");
    need("kind");
    if (rec.contains("error")) return;
    need("relation");
    need("witness_k");
    static const std::vector<std::string> tags = {"Accessible", "ConnectedNotAccessible", "SameTorusDisconnected",
                                                  "DifferentTorus"};
    if (std::find(tags.begin(), tags.end(), rec["relation"].get<std::string>()) == tags.end())
        throw std::runtime_error("unknown relation tag");
    const auto kind = rec["kind"].get<std::string>();
    if (kind == "distance") {
        need("spectral");
        need("horizontal");
        if (!real_or_inf(rec["spectral"]["value"]) || !real_or_inf(rec["horizontal"]))
            throw std::runtime_error("distance values must be numbers or inf");
    } else if (kind == "oracle") {
        need("report");
        for (const char* k : {"best_value", "comm_norm", "slack", "iterations", "restarts", "converged"})
            if (!rec["report"].contains(k)) throw std::runtime_error(std::string("oracle report lacks ") + k);
        if (!real_or_inf(rec["report"]["best_value"])) throw std::runtime_error("best_value must be a number");
    }
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << content;
        f.flush();
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

int run_all(const RunConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<const QuerySpec*> todo;
    for (const auto& q : cfg.queries)
        if ((opt.query.empty() || q.name == opt.query) && (opt.kind.empty() || q.kind == opt.kind)) todo.push_back(&q);
    if (!opt.query.empty() && todo.empty()) {
        err << "no query named '" << opt.query << "'" << (opt.kind.empty() ? "" : " of kind " + opt.kind) << "\n";
        return 1;
    }
    if (!opt.out_dir.empty()) std::filesystem::create_directories(opt.out_dir);
    const std::uint64_t seed = opt.seed ? opt.seed : cfg.oracle.seed;

    std::vector<QueryOutput> results(todo.size());
    std::atomic<std::size_t> next{0};
    std::mutex io;
    std::vector<std::string> write_errors(todo.size());
    auto worker = [&] {
        for (std::size_t i = next++; i < todo.size(); i = next++) {
            results[i] = run_query(cfg, *todo[i], seed);
            if (!opt.out_dir.empty()) {
                try {
                    write_atomic((std::filesystem::path(opt.out_dir) / (results[i].name + "." + results[i].extension)).string(),
                                 results[i].content);
                } catch (const std::exception& e) {
                    write_errors[i] = e.what();
                }
            }
        }
    };
    const int nw = std::max(1, std::min<int>(opt.workers, static_cast<int>(todo.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        if (!r.ok || !write_errors[i].empty()) code = 1;
        if (!r.ok) err << r.name << ": error: " << r.error << "\n";
        if (!write_errors[i].empty()) err << r.name << ": " << write_errors[i] << "\n";
        if (opt.echo) out << r.content;
        else out << r.name << " (" << r.kind << "): " << (r.ok ? "ok" : "failed") << "\n";
    }
    return code;
}

}  // namespace sc
