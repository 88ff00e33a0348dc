#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odsim/engine.hpp"
#include "odsim/graph.hpp"
#include "odsim/seeding.hpp"
#include "odsim/strategies.hpp"

namespace odsim {

/// Experiment description parsed from a line-oriented `key = value` file
/// with [section] headers and '#' comments.
struct ExperimentConfig {
    // [graph] either a file to load or inline generator parameters
    std::optional<std::string> graph_path;
    GraphParams graph_params;
    bool require_connected = true;

    // [run]
    std::size_t k = 0;  // required
    std::size_t packet_size = 64;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::vector<StrategyKind> strategies;
    std::vector<SeedingSpec> seedings;
    FailureModel failure;
    std::size_t grid_points = 100;
    double max_sim_time = 0.0;
    double lt_c = 0.0;
    double lt_delta = 0.5;
    unsigned threads = 0;

    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_text(const std::string& text, const std::string& origin);
    void validate() const;  // throws std::invalid_argument naming the field
};

}  // namespace odsim
