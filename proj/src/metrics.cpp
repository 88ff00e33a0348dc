#include "odsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace odsim {

namespace {

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::vector<double> make_time_grid(double t_max, std::size_t points) {
    if (points < 2) throw std::invalid_argument("make_time_grid: need at least two points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

LatencyCurve latency_curve(const std::vector<TrialMetrics>& trials,
                           const std::vector<double>& time_grid) {
    if (trials.empty()) throw std::invalid_argument("latency_curve: no trials");
    if (time_grid.empty()) throw std::invalid_argument("latency_curve: empty time grid");
    LatencyCurve curve;
    curve.times = time_grid;
    curve.percent_complete.assign(time_grid.size(), 0.0);
    for (const auto& tm : trials) {
        // finish times sorted once per trial, then swept along the grid
        std::vector<double> ft;
        ft.reserve(tm.finish_times.size());
        for (const auto& t : tm.finish_times)
            if (t) ft.push_back(*t);
        std::sort(ft.begin(), ft.end());
        const double n = static_cast<double>(tm.finish_times.size());
        std::size_t done = 0;
        for (std::size_t i = 0; i < time_grid.size(); ++i) {
            while (done < ft.size() && ft[done] <= time_grid[i]) ++done;
            curve.percent_complete[i] += 100.0 * static_cast<double>(done) / n;
        }
    }
    for (auto& p : curve.percent_complete) p /= static_cast<double>(trials.size());
    return curve;
}

double median_of(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median_of: empty");
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean_of: empty");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_stddev(const std::vector<double>& xs) {
    const double mu = mean_of(xs);
    double acc = 0.0;
    for (const auto x : xs) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

FinishSummary median_finish(const std::vector<TrialMetrics>& trials) {
    std::vector<double> finishes;
    for (const auto& t : trials)
        if (!t.truncated) finishes.push_back(t.network_finish());
    if (finishes.empty())
        throw std::runtime_error("median_finish: every trial truncated, finish time undefined");
    FinishSummary s;
    s.median = median_of(finishes);
    s.stddev = population_stddev(finishes);
    s.trials_used = finishes.size();
    return s;
}

TransmissionSummary transmission_summary(const std::vector<TrialMetrics>& trials) {
    TransmissionSummary s;
    s.trials = trials.size();
    for (const auto& t : trials) {
        s.meetings_avg += static_cast<double>(t.meetings_total);
        s.transmissions_avg += static_cast<double>(t.transmissions_total);
        s.innovative_avg += static_cast<double>(t.innovative_total);
        s.noninnovative_avg += static_cast<double>(t.noninnovative_total);
        if (t.truncated) ++s.truncated_trials;
    }
    const auto n = static_cast<double>(std::max<std::size_t>(1, trials.size()));
    s.meetings_avg /= n;
    s.transmissions_avg /= n;
    s.innovative_avg /= n;
    s.noninnovative_avg /= n;
    return s;
}

void write_latency_csv(const LatencyCurve& curve, const std::string& path) {
    auto out = open_out(path);
    out << "t,percent_complete\n";
    for (std::size_t i = 0; i < curve.times.size(); ++i)
        out << fmt6(curve.times[i]) << "," << fmt6(curve.percent_complete[i]) << "\n";
}

void write_finish_csv(const std::vector<TrialMetrics>& trials, const std::string& path) {
    auto out = open_out(path);
    out << "# stddev convention: population (divide by N)\n";
    out << "trial,network_finish,finished_nodes,truncated\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
        out << i << "," << fmt6(trials[i].network_finish()) << "," << trials[i].finished_count()
            << "," << (trials[i].truncated ? 1 : 0) << "\n";
    }
}

void write_summary_csv(const TransmissionSummary& s, const std::string& path) {
    auto out = open_out(path);
    out << "trials,truncated_trials,meetings_avg,transmissions_avg,innovative_avg,"
           "noninnovative_avg\n";
    out << s.trials << "," << s.truncated_trials << "," << fmt6(s.meetings_avg) << ","
        << fmt6(s.transmissions_avg) << "," << fmt6(s.innovative_avg) << ","
        << fmt6(s.noninnovative_avg) << "\n";
}

void write_per_node_csv(const std::vector<TrialMetrics>& trials, const ContactGraph& g,
                        const std::string& path) {
    auto out = open_out(path);
    out << "node,community,sent,received,noninnovative\n";
    // averaged over trials, nodes ordered by community then degree
    std::vector<std::uint32_t> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (g.membership[a] != g.membership[b]) return g.membership[a] < g.membership[b];
        return g.degree(a) < g.degree(b);
    });
    const auto n_trials = static_cast<double>(std::max<std::size_t>(1, trials.size()));
    for (const auto v : order) {
        double sent = 0, recv = 0, noninnov = 0;
        for (const auto& t : trials) {
            sent += static_cast<double>(t.per_node[v].sent);
            recv += static_cast<double>(t.per_node[v].received);
            noninnov += static_cast<double>(t.per_node[v].noninnovative_received);
        }
        out << v << "," << g.membership[v] << "," << fmt6(sent / n_trials) << ","
            << fmt6(recv / n_trials) << "," << fmt6(noninnov / n_trials) << "\n";
    }
}

}  // namespace odsim
