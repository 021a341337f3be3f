#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace css;
    CLI::App app{"Multi-peak solutions of the static Chern-Simons-Schroedinger system"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, cache_dir;
    int threads = 0;
    std::uint64_t seed = 0;
    std::vector<double> eps;
    std::size_t k = 0, n = 0;
    double p = 0.0;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--cache", cache_dir, "ground-state profile cache directory");
    app.add_option("--threads", threads, "worker threads (runs are sequential; recorded only)");
    app.add_option("--seed", seed, "seed for random test directions");
    app.add_option("--eps", eps, "override the epsilon list");
    app.add_option("--k", k, "override the number of peaks");
    app.add_option("--n", n, "override the verification grid size");
    app.add_option("--p", p, "override the exponent");

    auto* gs = app.add_subcommand("ground-state", "solve and cache the radial ground state");
    auto* gauge = app.add_subcommand("gauge-check", "gauge residuals and constraint identities on the ansatz");
    auto* verify = app.add_subcommand("verify", "run the invariant battery over the epsilon list");
    auto* solve = app.add_subcommand("solve", "maximize the reduced energy and emit the solution");
    auto* sweep = app.add_subcommand("sweep", "concentration sweep over the epsilon list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kSolverFailure;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
        if (threads > 0) cfg.threads = threads;
        if (app.count("--seed")) cfg.seed = seed;
        if (!eps.empty()) cfg.epsilons = eps;
        if (k > 0) cfg.k = k;
        if (n > 0) cfg.n = n;
        if (p != 0.0) cfg.p = p;
        cfg.validate();

        if (*gs) return cli::cmd_ground_state(cfg);
        if (*gauge) return cli::cmd_gauge_check(cfg);
        if (*verify) return cli::cmd_verify(cfg);
        if (*solve) return cli::cmd_solve(cfg);
        if (*sweep) return cli::cmd_sweep(cfg);
    } catch (const std::exception& e) {
        return cli::report_failure(e);
    }
    return cli::kSolverFailure;
}
