#include "odsim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace odsim {

namespace {

std::string cell_name(StrategyKind s, const SeedingSpec& seeding) {
    std::string n = describe(s) + "__" + seeding.describe();
    for (auto& c : n)
        if (c == '.' || c == ' ') c = '_';
    return n;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

}  // namespace

ContactGraph resolve_graph(const ExperimentConfig& cfg, std::uint64_t* effective_seed) {
    if (cfg.graph_path) {
        if (effective_seed) *effective_seed = 0;
        return load_graph(*cfg.graph_path);
    }
    GraphParams params = cfg.graph_params;
    for (int attempt = 0; attempt < 64; ++attempt) {
        GenStats stats;
        ContactGraph g = generate_graph(params, &stats);
        if (!cfg.require_connected || stats.globally_connected) {
            if (effective_seed) *effective_seed = params.seed;
            return g;
        }
        ++params.seed;
    }
    throw std::runtime_error("resolve_graph: no globally connected graph within 64 seeds of " +
                             std::to_string(cfg.graph_params.seed));
}

RunReport run_cells(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);

    RunReport report;
    std::uint64_t graph_seed = 0;
    report.graph = resolve_graph(cfg, &graph_seed);
    save_graph(report.graph, cfg.out_dir + "/graph.txt");

    // packet contents shared across every trial of every cell
    Rng file_rng = make_rng(cfg.seed ^ 0x66696c65ULL);
    const FilePayload file = FilePayload::random(cfg.k, cfg.packet_size, file_rng);

    std::ostringstream manifest;
    manifest << "# experiment manifest\n";
    {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        manifest << "timestamp_unix = "
                 << std::chrono::duration_cast<std::chrono::seconds>(now).count() << "\n";
    }
    manifest << "k = " << cfg.k << "\n";
    manifest << "packet_size = " << cfg.packet_size << "\n";
    manifest << "trials = " << cfg.trials << "\n";
    manifest << "base_seed = " << cfg.seed << "\n";
    manifest << "graph = " << (cfg.graph_path ? *cfg.graph_path : std::string("generated")) << "\n";
    manifest << "graph_seed = " << graph_seed << "\n";
    manifest << "failure = " << cfg.failure.describe() << "\n";
    manifest << "nodes = " << report.graph.n << "\n";
    manifest << "communities = " << report.graph.community_count() << "\n";

    std::uint64_t cell_index = 0;
    for (const auto strat : cfg.strategies) {
        for (const auto& seeding : cfg.seedings) {
            CellResult cell;
            cell.name = cell_name(strat, seeding);
            cell.strategy = strat;
            cell.seeding = seeding;
            // well-separated per-cell seed streams
            cell.base_seed = cfg.seed + (cell_index++) * 1000003ULL;
            try {
                TrialConfig tc;
                tc.graph = &report.graph;
                tc.file = &file;
                tc.strategy = strat;
                tc.seeding = seeding;
                tc.failure = cfg.failure;
                tc.max_sim_time = cfg.max_sim_time;
                tc.seed = cell.base_seed;
                tc.lt_c = cfg.lt_c;
                tc.lt_delta = cfg.lt_delta;
                const auto trials = run_experiment(tc, cfg.trials, cfg.threads);

                cell.finish = median_finish(trials);
                cell.summary = transmission_summary(trials);
                cell.any_truncated = cell.summary.truncated_trials > 0;

                double t_max = 0.0;
                for (const auto& t : trials) t_max = std::max(t_max, t.network_finish());
                if (t_max <= 0.0) t_max = 1.0;
                const auto grid = make_time_grid(t_max, cfg.grid_points);
                const auto curve = latency_curve(trials, grid);

                const std::string base = cfg.out_dir + "/" + cell.name;
                write_latency_csv(curve, base + "_latency.csv");
                write_finish_csv(trials, base + "_finish.csv");
                write_summary_csv(cell.summary, base + "_summary.csv");
                write_per_node_csv(trials, report.graph, base + "_pernode.csv");
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.ok = false;
                cell.error = e.what();
                ++report.failed_cells;
            }
            manifest << "cell = " << cell.name << " seed = " << cell.base_seed << " status = "
                     << (cell.ok ? "ok" : std::string("error: ") + cell.error) << "\n";
            report.cells.push_back(std::move(cell));
        }
    }
    atomic_write(cfg.out_dir + "/manifest.txt", manifest.str());
    return report;
}

std::string format_report(const std::string& out_dir) {
    const std::string manifest_path = out_dir + "/manifest.txt";
    std::ifstream manifest(manifest_path);
    if (!manifest) throw std::runtime_error("report: no manifest found in " + out_dir);

    std::vector<std::string> cells;
    std::string line;
    while (std::getline(manifest, line)) {
        if (line.rfind("cell = ", 0) == 0) {
            std::istringstream ss(line.substr(7));
            std::string name;
            ss >> name;
            cells.push_back(name);
        }
    }
    if (cells.empty()) throw std::runtime_error("report: manifest lists no cells in " + out_dir);

    // finish-time table: one row per seeding, one column per strategy
    std::vector<std::string> strategies, seedings;
    std::map<std::pair<std::string, std::string>, std::string> entries;
    std::vector<std::string> missing;
    for (const auto& cell : cells) {
        const auto sep = cell.find("__");
        if (sep == std::string::npos) continue;
        const std::string strat = cell.substr(0, sep);
        const std::string seeding = cell.substr(sep + 2);
        if (std::find(strategies.begin(), strategies.end(), strat) == strategies.end())
            strategies.push_back(strat);
        if (std::find(seedings.begin(), seedings.end(), seeding) == seedings.end())
            seedings.push_back(seeding);

        std::ifstream fin(out_dir + "/" + cell + "_finish.csv");
        if (!fin) {
            missing.push_back(cell);
            continue;
        }
        std::vector<double> finishes;
        bool truncated = false;
        std::string row;
        while (std::getline(fin, row)) {
            if (row.empty() || row[0] == '#' || row.rfind("trial,", 0) == 0) continue;
            std::stringstream ss(row);
            std::string fld;
            std::getline(ss, fld, ',');
            std::getline(ss, fld, ',');
            const double ft = std::stod(fld);
            std::getline(ss, fld, ',');
            std::getline(ss, fld, ',');
            if (std::stoi(fld) != 0)
                truncated = true;
            else
                finishes.push_back(ft);
        }
        char buf[64];
        if (finishes.empty()) {
            std::snprintf(buf, sizeof buf, "n/a*");
        } else {
            std::snprintf(buf, sizeof buf, "%.4g(%.3g)%s", median_of(finishes),
                          population_stddev(finishes), truncated ? "*" : "");
        }
        entries[{seeding, strat}] = buf;
    }
    if (!missing.empty()) {
        std::string msg = "report: missing outputs for cells:";
        for (const auto& m : missing) msg += " " + m;
        throw std::runtime_error(msg);
    }

    std::ostringstream out;
    out << "median(std) finish times; * marks cells with truncated trials\n";
    const int w = 24;
    out << std::string(16, ' ');
    for (const auto& s : strategies) {
        std::string h = s;
        if (h.size() > static_cast<std::size_t>(w - 2)) h.resize(w - 2);
        out << h << std::string(w - h.size(), ' ');
    }
    out << "\n";
    for (const auto& seeding : seedings) {
        std::string h = seeding;
        if (h.size() > 14) h.resize(14);
        out << h << std::string(16 - h.size(), ' ');
        for (const auto& s : strategies) {
            const auto it = entries.find({seeding, s});
            const std::string v = it == entries.end() ? "-" : it->second;
            out << v << std::string(v.size() < static_cast<std::size_t>(w) ? w - v.size() : 1, ' ');
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace odsim
