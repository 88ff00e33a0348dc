#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "odsim/metrics.hpp"

using namespace odsim;

namespace {

TrialMetrics trial_with_finishes(std::initializer_list<double> times, bool truncated = false) {
    TrialMetrics m;
    for (const auto t : times) m.finish_times.push_back(t < 0 ? std::nullopt
                                                              : std::optional<double>(t));
    m.per_node.assign(m.finish_times.size(), {});
    m.truncated = truncated;
    return m;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("latency curve is a step function for a single trial") {
    const auto m = trial_with_finishes({5.0, 5.0, 5.0, 0.0});
    const auto grid = make_time_grid(10.0, 11);
    const auto curve = latency_curve({m}, grid);
    CHECK(curve.percent_complete.front() == doctest::Approx(25.0));  // one seeded-complete node
    CHECK(curve.percent_complete.back() == doctest::Approx(100.0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 5.0) CHECK(curve.percent_complete[i] == doctest::Approx(25.0));
        else CHECK(curve.percent_complete[i] == doctest::Approx(100.0));
    }
}

TEST_CASE("latency curves are nondecreasing") {
    Rng rng = make_rng(1);
    std::vector<TrialMetrics> trials;
    for (int t = 0; t < 50; ++t) {
        TrialMetrics m;
        for (int v = 0; v < 20; ++v) {
            if (uniform_index(rng, 5) == 0) m.finish_times.push_back(std::nullopt);
            else m.finish_times.push_back(uniform_real(rng, 0.0, 30.0));
        }
        m.per_node.assign(20, {});
        trials.push_back(std::move(m));
    }
    const auto curve = latency_curve(trials, make_time_grid(40.0, 100));
    for (std::size_t i = 1; i < curve.times.size(); ++i)
        CHECK(curve.percent_complete[i] >= curve.percent_complete[i - 1] - 1e-12);
}

TEST_CASE("latency curve rejects an empty grid") {
    const auto m = trial_with_finishes({1.0});
    CHECK_THROWS_AS(latency_curve({m}, {}), std::invalid_argument);
}

TEST_CASE("median finish over simple trial sets") {
    const std::vector<TrialMetrics> trials{trial_with_finishes({5.0}),
                                           trial_with_finishes({6.0}),
                                           trial_with_finishes({7.0})};
    const auto f = median_finish(trials);
    CHECK(f.median == doctest::Approx(6.0));
    CHECK(f.trials_used == 3);

    const std::vector<TrialMetrics> same{trial_with_finishes({4.0}), trial_with_finishes({4.0})};
    CHECK(median_finish(same).stddev == doctest::Approx(0.0));

    const std::vector<TrialMetrics> all_truncated{trial_with_finishes({1.0}, true)};
    CHECK_THROWS_AS(median_finish(all_truncated), std::runtime_error);
}

TEST_CASE("truncated trials are excluded from the median but flagged in the summary") {
    std::vector<TrialMetrics> trials{trial_with_finishes({2.0}), trial_with_finishes({9.0}, true)};
    trials[1].meetings_total = 10;
    const auto f = median_finish(trials);
    CHECK(f.trials_used == 1);
    CHECK(f.median == doctest::Approx(2.0));
    const auto s = transmission_summary(trials);
    CHECK(s.truncated_trials == 1);
}

TEST_CASE("transmission summary averages plainly") {
    TrialMetrics a, b;
    a.finish_times = {std::optional<double>(1.0)};
    b.finish_times = {std::optional<double>(2.0)};
    a.per_node.assign(1, {});
    b.per_node.assign(1, {});
    a.meetings_total = 10;
    b.meetings_total = 20;
    a.transmissions_total = 4;
    b.transmissions_total = 8;
    a.innovative_total = 3;
    b.innovative_total = 5;
    a.noninnovative_total = 1;
    b.noninnovative_total = 3;
    const auto s = transmission_summary({a, b});
    CHECK(s.meetings_avg == doctest::Approx(15.0));
    CHECK(s.transmissions_avg == doctest::Approx(6.0));
    CHECK(s.innovative_avg == doctest::Approx(4.0));
    CHECK(s.noninnovative_avg == doctest::Approx(2.0));
}

TEST_CASE("latency csv schema and round-trip at six significant digits") {
    LatencyCurve curve;
    curve.times = {0.0, 1.2345678, 2.5};
    curve.percent_complete = {0.0, 33.333333, 100.0};
    const auto path = temp_path("odsim_latency.csv");
    write_latency_csv(curve, path);
    const auto text = slurp(path);
    CHECK(text.rfind("t,percent_complete\n", 0) == 0);

    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double t = std::stod(line.substr(0, comma));
        const double pct = std::stod(line.substr(comma + 1));
        CHECK(std::abs(t - curve.times[row]) <= 1e-5 * std::max(1.0, std::abs(curve.times[row])));
        CHECK(std::abs(pct - curve.percent_complete[row]) <=
              1e-5 * std::max(1.0, std::abs(curve.percent_complete[row])));
        ++row;
    }
    CHECK(row == 3);
    std::filesystem::remove(path);
}

TEST_CASE("per-node csv carries the documented columns") {
    ContactGraph g;
    g.n = 3;
    g.membership = {1, 0, 0};
    g.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
    g.rebuild_adjacency();
    TrialMetrics m;
    m.finish_times.assign(3, std::optional<double>(1.0));
    m.per_node.assign(3, {});
    m.per_node[0].sent = 5;
    m.per_node[0].received = 2;
    m.per_node[0].noninnovative_received = 1;
    const auto path = temp_path("odsim_pernode.csv");
    write_per_node_csv({m}, g, path);
    const auto text = slurp(path);
    CHECK(text.rfind("node,community,sent,received,noninnovative\n", 0) == 0);
    // community 0 rows come first (sorted by community, then degree)
    const auto first_row = text.substr(text.find('\n') + 1);
    CHECK(first_row.substr(0, first_row.find(',')) != "0");
    CHECK(text.find("0,1,5,2,1") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("finish csv marks truncated trials") {
    const std::vector<TrialMetrics> trials{trial_with_finishes({3.25}),
                                           trial_with_finishes({-1.0}, true)};
    const auto path = temp_path("odsim_finish.csv");
    write_finish_csv(trials, path);
    const auto text = slurp(path);
    CHECK(text.find("trial,network_finish,finished_nodes,truncated") != std::string::npos);
    CHECK(text.find("0,3.25,1,0") != std::string::npos);
    CHECK(text.find("1,0,0,1") != std::string::npos);
    std::filesystem::remove(path);
}
