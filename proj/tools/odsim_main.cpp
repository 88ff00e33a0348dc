// Command-line front end: generate contact graphs, run experiment
// configs, and print finish-time report tables.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "odsim/config.hpp"
#include "odsim/experiment.hpp"
#include "odsim/graph.hpp"
#include "odsim/lt.hpp"

using namespace odsim;

namespace {

int cmd_gen(const GraphParams& base, const std::string& out_path, bool require_connected) {
    GraphParams params = base;
    GenStats stats;
    ContactGraph g;
    for (int attempt = 0;; ++attempt) {
        g = generate_graph(params, &stats);
        if (!require_connected || stats.globally_connected) break;
        if (attempt >= 63)
            throw std::runtime_error("gen: no globally connected graph within 64 seeds of " +
                                     std::to_string(base.seed));
        ++params.seed;
    }
    save_graph(g, out_path);
    std::printf("graph: %zu nodes, %zu communities, %zu edges -> %s\n", g.n,
                g.community_count(), g.edges.size(), out_path.c_str());
    std::printf("seed: %llu\n", static_cast<unsigned long long>(params.seed));
    std::printf("realized inter-community edge fraction: %.4f\n",
                stats.realized_inter_edge_fraction);
    std::printf("realized inter-community weight share:  %.6f\n", stats.realized_weight_mix);
    std::printf("weight residual p95: %.4f, clamped nodes: %zu, globally connected: %s\n",
                stats.weight_residual_p95, stats.clamped_nodes,
                stats.globally_connected ? "yes" : "no");
    return 0;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::size_t> trials, std::optional<std::string> out,
            std::optional<unsigned> threads) {
    ExperimentConfig cfg = ExperimentConfig::parse_file(config_path);
    if (seed) cfg.seed = *seed;
    if (trials) cfg.trials = *trials;
    if (out) cfg.out_dir = *out;
    if (threads) cfg.threads = *threads;
    cfg.validate();
    if (cfg.lt_c > 0.0) {
        SolitonParams sp{cfg.k, cfg.lt_c, cfg.lt_delta};
        if (!sp.c_in_band())
            std::fprintf(stderr,
                         "warning: lt_c=%g outside the admissible band [%g, %g] for k=%zu\n",
                         cfg.lt_c, SolitonParams::c_lower(cfg.k, cfg.lt_delta),
                         SolitonParams::c_upper(cfg.k, cfg.lt_delta), cfg.k);
    }

    const auto report = run_cells(cfg);
    for (const auto& cell : report.cells) {
        if (cell.ok) {
            std::printf("cell %-44s median_finish=%.6g tx_avg=%.6g%s\n", cell.name.c_str(),
                        cell.finish.median, cell.summary.transmissions_avg,
                        cell.any_truncated ? " [truncated trials]" : "");
        } else {
            std::printf("cell %-44s FAILED: %s\n", cell.name.c_str(), cell.error.c_str());
        }
    }
    std::printf("outputs in %s\n", cfg.out_dir.c_str());
    if (report.failed_cells > 0) {
        std::fprintf(stderr, "error: %zu cell(s) failed\n", report.failed_cells);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opportunistic content dissemination simulator"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a community contact graph");
    GraphParams gp;
    std::string gen_out = "graph.txt";
    bool gen_connected = true;
    std::size_t gen_communities = 0;
    gen->add_option("--n", gp.n, "node count");
    gen->add_option("--avg-degree", gp.avg_degree, "mean degree");
    gen->add_option("--max-degree", gp.max_degree, "degree cap");
    gen->add_option("--gamma", gp.gamma, "degree power-law exponent");
    gen->add_option("--community-exponent", gp.community_exponent,
                    "community-size power-law exponent");
    gen->add_option("--minc", gp.minc, "minimum community size");
    gen->add_option("--maxc", gp.maxc, "maximum community size");
    gen->add_option("--communities", gen_communities, "force an exact community count");
    gen->add_option("--mu-t", gp.mu_t, "topology mixing fraction");
    gen->add_option("--mu-w", gp.mu_w, "weight mixing fraction");
    gen->add_option("--beta", gp.beta, "strength exponent");
    gen->add_option("--seed", gp.seed, "rng seed");
    gen->add_option("--out", gen_out, "output graph file");
    gen->add_flag("--require-connected,!--no-require-connected", gen_connected,
                  "bump the seed until the graph is globally connected");

    // run
    auto* run = app.add_subcommand("run", "run an experiment config");
    std::string run_config;
    std::optional<std::uint64_t> run_seed;
    std::optional<std::size_t> run_trials;
    std::optional<std::string> run_out;
    std::optional<unsigned> run_threads;
    run->add_option("config", run_config, "experiment config file")->required();
    run->add_option("--seed", run_seed, "override base seed");
    run->add_option("--trials", run_trials, "override trial count");
    run->add_option("--out", run_out, "override output directory");
    run->add_option("--threads", run_threads, "worker threads (0 = auto)");

    // report
    auto* rep = app.add_subcommand("report", "summarize a run output directory");
    std::string rep_dir;
    rep->add_option("dir", rep_dir, "output directory from 'run'")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (gen_communities > 0) gp.n_communities = gen_communities;
            return cmd_gen(gp, gen_out, gen_connected);
        }
        if (run->parsed()) return cmd_run(run_config, run_seed, run_trials, run_out, run_threads);
        if (rep->parsed()) {
            std::cout << format_report(rep_dir);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
