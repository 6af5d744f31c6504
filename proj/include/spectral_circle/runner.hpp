#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "spectral_circle/config.hpp"

namespace sc {

// 17 significant digits, locale independent; infinities print as "inf"/"-inf".
std::string format_number(double v);

// JSON text with every floating-point number written by format_number.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

struct QueryOutput {
    std::string name;
    std::string kind;
    std::string extension;  // "json" or "csv"
    std::string content;
    bool ok = true;
    std::string error;
};

// Per-query RNG seed: depends only on the run seed and the query name.
std::uint64_t query_seed(std::uint64_t run_seed, const std::string& name);

QueryOutput run_query(const RunConfig& cfg, const QuerySpec& q, std::uint64_t run_seed);

// Structural check of a JSON record written by run_query; throws std::runtime_error.
void validate_record(const nlohmann::json& rec);

// write to a temporary sibling, then rename over the target
void write_atomic(const std::string& path, const std::string& content);

struct RunOptions {
    std::string out_dir;      // empty: no files
    std::string query;        // only this query name
    std::string kind;         // only this kind
    std::uint64_t seed = 0;   // 0: use [oracle] seed
    int workers = 1;
    bool echo = false;        // print each output to the stream
};

// Returns the process exit code: 0 all queries succeeded, 1 some query failed.
int run_all(const RunConfig& cfg, const RunOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace sc
