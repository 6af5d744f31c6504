#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spectral_circle/distances.hpp"
#include "spectral_circle/oracle.hpp"

namespace sc {

// Run configuration: INI-style sections holding `key = value` lines whose
// values are JSON literals (a value may continue over several lines while its
// brackets are open). Lines starting with '#' or ';' are comments.
//
//   [connection]   theta = [{"mean": 0.0, "harmonics": [[1, 0.2, 0.0]]}, {"mean": -0.31}]
//   [tolerance]    holonomy, phase, modulus, k_max
//   [optimizer]    grid_n, refine_tol, grid2d_n, cross_check
//   [oracle]       N, restarts, iters, seed, stages, temp_start, temp_end, p_max
//   [query.NAME]   kind = "distance" | "classify" | "profile-fiber" | "profile-torus" | "oracle"
//                  plus the kind's own keys (xi, zeta, k_min, ...)
struct QuerySpec {
    std::string name;
    std::string kind;
    nlohmann::json params;  // every key of the section except kind
    int line = 0;
};

struct RunConfig {
    ConnectionSpec connection;
    Tolerances tol;
    OptimizerOptions optimizer;
    OracleOptions oracle;
    std::vector<QuerySpec> queries;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// State given as {"base": x, "ray": [[re, im], ...]} or {"base": x, "bloch": [z, azimuth]}.
PureState parse_state(const nlohmann::json& j, std::size_t n);
// zeta may also be {"coords": {"k": .., "tau0": .., "phi": [phi_1, ..., phi_{n-1}]}} relative to xi.
PureState parse_target(const nlohmann::json& j, const ConnectionSpec& spec, const PureState& xi);

}  // namespace sc
