#pragma once

#include <string>
#include <vector>

#include "odsim/engine.hpp"
#include "odsim/graph.hpp"

namespace odsim {

/// Expected percentage of nodes holding the complete file at each grid time,
/// averaged over trials.
struct LatencyCurve {
    std::vector<double> times;
    std::vector<double> percent_complete;
};

std::vector<double> make_time_grid(double t_max, std::size_t points);

LatencyCurve latency_curve(const std::vector<TrialMetrics>& trials,
                           const std::vector<double>& time_grid);

struct FinishSummary {
    double median = 0.0;
    double stddev = 0.0;  // population (divide by N)
    std::size_t trials_used = 0;
};

/// Per-trial network finish time (max over nodes), summarized across the
/// untruncated trials. Throws std::runtime_error when every trial truncated.
FinishSummary median_finish(const std::vector<TrialMetrics>& trials);

struct TransmissionSummary {
    double meetings_avg = 0.0;
    double transmissions_avg = 0.0;
    double innovative_avg = 0.0;
    double noninnovative_avg = 0.0;
    std::size_t trials = 0;
    std::size_t truncated_trials = 0;
};

TransmissionSummary transmission_summary(const std::vector<TrialMetrics>& trials);

double median_of(std::vector<double> xs);
double mean_of(const std::vector<double>& xs);
double population_stddev(const std::vector<double>& xs);

/// CSV writers; floats carry 6 significant digits, stable column order.
void write_latency_csv(const LatencyCurve& curve, const std::string& path);
void write_finish_csv(const std::vector<TrialMetrics>& trials, const std::string& path);
void write_summary_csv(const TransmissionSummary& s, const std::string& path);
void write_per_node_csv(const std::vector<TrialMetrics>& trials, const ContactGraph& g,
                        const std::string& path);

}  // namespace odsim
