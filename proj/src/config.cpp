#include "odsim/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace odsim {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

ExperimentConfig ExperimentConfig::parse_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    bool k_set = false;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("config " + origin + ":" + std::to_string(lineno) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) fail("empty key or value");

        try {
            if (section == "graph") {
                auto& p = cfg.graph_params;
                if (key == "path") cfg.graph_path = value;
                else if (key == "n") p.n = std::stoul(value);
                else if (key == "avg_degree") p.avg_degree = std::stod(value);
                else if (key == "max_degree") p.max_degree = std::stoul(value);
                else if (key == "gamma") p.gamma = std::stod(value);
                else if (key == "community_exponent") p.community_exponent = std::stod(value);
                else if (key == "minc") p.minc = std::stoul(value);
                else if (key == "maxc") p.maxc = std::stoul(value);
                else if (key == "communities") p.n_communities = std::stoul(value);
                else if (key == "mu_t") p.mu_t = std::stod(value);
                else if (key == "mu_w") p.mu_w = std::stod(value);
                else if (key == "beta") p.beta = std::stod(value);
                else if (key == "seed") p.seed = std::stoull(value);
                else if (key == "require_connected") cfg.require_connected = std::stoi(value) != 0;
                else fail("unknown [graph] key '" + key + "'");
            } else if (section == "run") {
                if (key == "k") { cfg.k = std::stoul(value); k_set = true; }
                else if (key == "packet_size") cfg.packet_size = std::stoul(value);
                else if (key == "trials") cfg.trials = std::stoul(value);
                else if (key == "seed") cfg.seed = std::stoull(value);
                else if (key == "out") cfg.out_dir = value;
                else if (key == "strategies") {
                    for (const auto& s : split_list(value))
                        cfg.strategies.push_back(parse_strategy(s));
                } else if (key == "seedings") {
                    for (const auto& s : split_list(value))
                        cfg.seedings.push_back(SeedingSpec::parse(s));
                } else if (key == "failure") cfg.failure = FailureModel::parse(value);
                else if (key == "grid_points") cfg.grid_points = std::stoul(value);
                else if (key == "max_sim_time") cfg.max_sim_time = std::stod(value);
                else if (key == "lt_c") cfg.lt_c = std::stod(value);
                else if (key == "lt_delta") cfg.lt_delta = std::stod(value);
                else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
                else fail("unknown [run] key '" + key + "'");
            } else {
                fail("key outside of a known section ([graph] or [run])");
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            fail(std::string("bad value for '") + key + "': " + e.what());
        }
    }

    if (!k_set) throw std::invalid_argument("config " + origin + ": missing required field 'k'");
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (k < 1) throw std::invalid_argument("config: field 'k' must be >= 1");
    if (packet_size < 1) throw std::invalid_argument("config: field 'packet_size' must be >= 1");
    if (trials < 1) throw std::invalid_argument("config: field 'trials' must be >= 1");
    if (strategies.empty()) throw std::invalid_argument("config: field 'strategies' must list at least one strategy");
    if (seedings.empty()) throw std::invalid_argument("config: field 'seedings' must list at least one seeding");
    if (grid_points < 2) throw std::invalid_argument("config: field 'grid_points' must be >= 2");
    if (!graph_path) graph_params.validate();
    failure.validate();
}

}  // namespace odsim
