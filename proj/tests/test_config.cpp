#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "odsim/config.hpp"
#include "odsim/experiment.hpp"

using namespace odsim;

namespace {

const char* kDeskText = R"(
# desk-scale experiment
[graph]
n = 40
avg_degree = 6
max_degree = 12
minc = 8
maxc = 12
communities = 4
seed = 7

[run]
k = 8
packet_size = 16
trials = 3
seed = 42
strategies = epidemic_random, nc
seedings = community:1.0, random
grid_points = 20
)";

std::string temp_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir.string();
}

}  // namespace

TEST_CASE("config parses sections, lists and comments") {
    const auto cfg = ExperimentConfig::parse_text(kDeskText, "inline");
    CHECK(cfg.k == 8);
    CHECK(cfg.packet_size == 16);
    CHECK(cfg.trials == 3);
    CHECK(cfg.seed == 42);
    CHECK(cfg.strategies.size() == 2);
    CHECK(cfg.seedings.size() == 2);
    CHECK(cfg.graph_params.n == 40);
    CHECK(cfg.graph_params.n_communities.value() == 4);
    CHECK(cfg.failure.kind == FailureModel::Kind::none);
}

TEST_CASE("missing k is reported by name") {
    const char* text = "[run]\nstrategies = nc\nseedings = random\n";
    CHECK_THROWS_WITH_AS(static_cast<void>(ExperimentConfig::parse_text(text, "inline")),
                         doctest::Contains("'k'"), std::invalid_argument);
}

TEST_CASE("unknown keys and malformed lines carry line numbers") {
    CHECK_THROWS_WITH_AS(
        static_cast<void>(ExperimentConfig::parse_text("[run]\nk = 8\nwhat = 1\n", "inline")),
        doctest::Contains(":3:"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        static_cast<void>(ExperimentConfig::parse_text("[run]\nk 8\n", "inline")),
        doctest::Contains(":2:"), std::invalid_argument);
}

TEST_CASE("empty strategy or seeding lists are rejected") {
    CHECK_THROWS_WITH_AS(static_cast<void>(ExperimentConfig::parse_text(
                             "[run]\nk = 8\nseedings = random\n", "inline")),
                         doctest::Contains("strategies"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(static_cast<void>(ExperimentConfig::parse_text(
                             "[run]\nk = 8\nstrategies = nc\n", "inline")),
                         doctest::Contains("seedings"), std::invalid_argument);
}

TEST_CASE("run produces per-cell outputs, a manifest, and is reproducible") {
    auto cfg = ExperimentConfig::parse_text(kDeskText, "inline");
    const auto out1 = temp_dir("odsim_run1");
    const auto out2 = temp_dir("odsim_run2");

    cfg.out_dir = out1;
    const auto r1 = run_cells(cfg);
    CHECK(r1.failed_cells == 0);
    CHECK(r1.cells.size() == 4);
    for (const auto& cell : r1.cells) {
        CHECK(cell.ok);
        for (const auto* suffix : {"_latency.csv", "_finish.csv", "_summary.csv", "_pernode.csv"})
            CHECK(std::filesystem::exists(out1 + "/" + cell.name + suffix));
    }
    CHECK(std::filesystem::exists(out1 + "/manifest.txt"));
    CHECK(std::filesystem::exists(out1 + "/graph.txt"));

    cfg.out_dir = out2;
    const auto r2 = run_cells(cfg);
    // identical bytes for every artifact except the manifest timestamp
    for (const auto& cell : r1.cells) {
        for (const auto* suffix : {"_latency.csv", "_finish.csv", "_summary.csv", "_pernode.csv"}) {
            std::ifstream a(out1 + "/" + cell.name + suffix), b(out2 + "/" + cell.name + suffix);
            const std::string sa((std::istreambuf_iterator<char>(a)),
                                 std::istreambuf_iterator<char>());
            const std::string sb((std::istreambuf_iterator<char>(b)),
                                 std::istreambuf_iterator<char>());
            CHECK(sa == sb);
        }
    }
    (void)r2;

    const auto table = format_report(out1);
    CHECK(table.find("epidemic_random") != std::string::npos);
    CHECK(table.find("community_100") != std::string::npos);
    CHECK(table.find("random") != std::string::npos);

    std::filesystem::remove_all(out1);
    std::filesystem::remove_all(out2);
}

TEST_CASE("report on an empty directory is an error") {
    const auto dir = temp_dir("odsim_empty");
    std::filesystem::create_directories(dir);
    CHECK_THROWS_AS(static_cast<void>(format_report(dir)), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("report lists cells whose outputs vanished") {
    auto cfg = ExperimentConfig::parse_text(kDeskText, "inline");
    cfg.strategies = {StrategyKind::epidemic_random};
    cfg.seedings = {SeedingSpec::parse("community:1.0")};
    const auto dir = temp_dir("odsim_missing");
    cfg.out_dir = dir;
    run_cells(cfg);
    std::filesystem::remove(dir + "/epidemic_random__community_100_finish.csv");
    CHECK_THROWS_WITH_AS(static_cast<void>(format_report(dir)),
                         doctest::Contains("epidemic_random__community_100"), std::runtime_error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("a failing cell is isolated; the others complete") {
    // a singleton community cannot hold 150% distinct copies, so that cell
    // errors while the 100% cell still produces its outputs
    const auto dir = temp_dir("odsim_isolate");
    std::filesystem::create_directories(dir);
    {
        std::ofstream g(dir + "/g.txt");
        g << "nodes 3 communities 2\nm 0 0\nm 1 0\nm 2 1\ne 0 1 1\ne 1 2 0.5\n";
    }
    ExperimentConfig cfg;
    cfg.graph_path = dir + "/g.txt";
    cfg.k = 4;
    cfg.packet_size = 8;
    cfg.trials = 2;
    cfg.seed = 5;
    cfg.out_dir = dir + "/out";
    cfg.strategies = {StrategyKind::epidemic_random};
    cfg.seedings = {SeedingSpec::parse("community:1.0"), SeedingSpec::parse("community:1.5")};
    const auto r = run_cells(cfg);
    CHECK(r.failed_cells == 1);
    REQUIRE(r.cells.size() == 2);
    CHECK(r.cells[0].ok);
    CHECK_FALSE(r.cells[1].ok);
    CHECK(std::filesystem::exists(dir + "/out/epidemic_random__community_100_finish.csv"));
    CHECK_FALSE(std::filesystem::exists(dir + "/out/epidemic_random__community_150_finish.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("resolve_graph loads from a path") {
    const auto dir = temp_dir("odsim_loadg");
    std::filesystem::create_directories(dir);
    GraphParams p;
    p.n = 30;
    p.minc = 10;
    p.maxc = 15;
    p.avg_degree = 6;
    p.max_degree = 10;
    p.seed = 3;
    const auto g = generate_graph(p);
    save_graph(g, dir + "/g.txt");

    ExperimentConfig cfg;
    cfg.graph_path = dir + "/g.txt";
    const auto loaded = resolve_graph(cfg);
    CHECK(loaded == g);
    std::filesystem::remove_all(dir);
}
