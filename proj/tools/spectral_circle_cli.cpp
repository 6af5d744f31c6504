// Command-line driver: runs the queries of a config file.
//
//   spectral_circle_cli --config run.cfg --out results/           all queries, one file each
//   spectral_circle_cli --config run.cfg classify --query pair    one kind, printed to stdout
//   spectral_circle_cli --config run.cfg oracle --N 512 --restarts 4
//
// Exit codes: 0 success, 1 a query failed, 2 configuration or usage error.
#include <iostream>

#include <CLI11.hpp>

#include "spectral_circle/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Spectral and horizontal distances on a circle bundle with a U(1)^n connection"};
    std::string config, out_dir, query;
    std::uint64_t seed = 0;
    int workers = 1;
    app.add_option("--config", config, "run configuration file")->required();
    app.add_option("--out", out_dir, "directory for per-query output files");
    app.add_option("--query", query, "run only the query with this name");
    app.add_option("--seed", seed, "run seed (default: [oracle] seed)");
    app.add_option("--workers", workers, "queries evaluated concurrently")->check(CLI::Range(1, 256));

    const char* kinds[] = {"distance", "classify", "profile-fiber", "profile-torus", "oracle"};
    std::vector<CLI::App*> subs;
    for (const char* k : kinds) subs.push_back(app.add_subcommand(k, std::string("run only '") + k + "' queries and print them"));
    int oN = 0, orestarts = 0, oiters = 0;
    CLI::App* orc = subs.back();
    orc->add_option("--N", oN, "grid size")->check(CLI::Range(64, 1 << 20));
    orc->add_option("--restarts", orestarts, "ascent restarts")->check(CLI::Range(1, 10000));
    orc->add_option("--iters", oiters, "iterations per restart")->check(CLI::Range(1, 100000000));
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    sc::RunConfig cfg;
    try {
        cfg = sc::load_config(config);
        if (oN) cfg.oracle.N = oN;
        if (orestarts) cfg.oracle.restarts = orestarts;
        if (oiters) cfg.oracle.iters = oiters;
        cfg.oracle.validate();
    } catch (const std::exception& e) {
        std::cerr << config << ": " << e.what() << "\n";
        return 2;
    }

    sc::RunOptions opt;
    opt.out_dir = out_dir;
    opt.query = query;
    opt.seed = seed;
    opt.workers = workers;
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) {
            opt.kind = kinds[i];
            opt.echo = true;
        }
    if (opt.kind == "oracle") {
        // command-line overrides beat per-query values
        for (auto& q : cfg.queries) {
            if (oN) q.params.erase("N");
            if (orestarts) q.params.erase("restarts");
            if (oiters) q.params.erase("iters");
        }
    }
    try {
        return sc::run_all(cfg, opt, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
