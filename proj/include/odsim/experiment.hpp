#pragma once

#include <string>
#include <vector>

#include "odsim/config.hpp"
#include "odsim/graph.hpp"
#include "odsim/metrics.hpp"

namespace odsim {

struct CellResult {
    std::string name;  // "<strategy>__<seeding>"
    StrategyKind strategy;
    SeedingSpec seeding;
    std::uint64_t base_seed = 0;
    bool ok = false;
    std::string error;
    FinishSummary finish;
    TransmissionSummary summary;
    bool any_truncated = false;
};

struct RunReport {
    ContactGraph graph;
    std::vector<CellResult> cells;
    std::size_t failed_cells = 0;
};

/// Resolves the configured graph: loads it from `path` or generates it from
/// the inline parameters, bumping the seed until the graph is globally
/// connected when `require_connected` is set. Returns the effective seed.
ContactGraph resolve_graph(const ExperimentConfig& cfg, std::uint64_t* effective_seed = nullptr);

/// Runs the full strategy x seeding cross product, one output file set per
/// cell plus a manifest; a failing cell is recorded and skipped, the rest
/// complete.
RunReport run_cells(const ExperimentConfig& cfg);

/// Prints the median(std) finish-time table for a completed output
/// directory; throws std::runtime_error listing absent cells.
std::string format_report(const std::string& out_dir);

}  // namespace odsim
