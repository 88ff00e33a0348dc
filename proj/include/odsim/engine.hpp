#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "odsim/graph.hpp"
#include "odsim/lt.hpp"
#include "odsim/rlnc.hpp"
#include "odsim/seeding.hpp"
#include "odsim/strategies.hpp"

namespace odsim {

struct FailureModel {
    enum class Kind { none, periodic, mcu_partial };
    Kind kind = Kind::none;
    double interval = 0.0;   // periodic: time between failures
    double fraction = 0.0;   // mcu_partial: share of seeded packets spread before death

    void validate() const;
    std::string describe() const;
    static FailureModel parse(const std::string& text);  // "none", "periodic:1.0", "mcu_partial:0.5"
};

struct TrialConfig {
    const ContactGraph* graph = nullptr;
    const FilePayload* file = nullptr;  // shared read-only packet contents
    StrategyKind strategy = StrategyKind::epidemic_random;
    SeedingSpec seeding;
    FailureModel failure;
    double max_sim_time = 0.0;  // 0 = unlimited (structural cutoff still applies)
    std::uint64_t seed = 1;
    double lt_c = 0.0;      // 0 = midpoint of the admissible band
    double lt_delta = 0.5;
    std::ostream* event_log = nullptr;

    SolitonParams lt_params() const;
    void validate() const;
};

struct PerNodeStats {
    std::uint64_t sent = 0;
    std::uint64_t received = 0;
    std::uint64_t noninnovative_received = 0;
};

struct TrialMetrics {
    std::vector<std::optional<double>> finish_times;  // per node; empty when dead or truncated
    std::uint64_t meetings_total = 0;
    std::uint64_t transmissions_total = 0;
    std::uint64_t innovative_total = 0;
    std::uint64_t noninnovative_total = 0;
    std::vector<PerNodeStats> per_node;
    std::size_t seeded_total = 0;
    bool truncated = false;
    std::string truncated_reason;

    /// Latest finish over all nodes that finished; 0 when none did.
    double network_finish() const;
    std::size_t finished_count() const;
    std::string to_string() const;  // canonical serialization
};

/// Next firing of an exponential pairwise meeting clock with rate w.
double next_meeting_time(double now, double w, Rng& rng);

TrialMetrics run_trial(const TrialConfig& cfg);

/// n_trials independent trials with seeds base.seed + index; trials may run
/// on several threads, results land in index order either way. For failure
/// configs without an explicit max_sim_time, a no-failure pilot trial pins
/// the cutoff at 100x its network finish time.
std::vector<TrialMetrics> run_experiment(const TrialConfig& base, std::size_t n_trials,
                                         unsigned threads = 0);

}  // namespace odsim
