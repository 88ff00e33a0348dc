#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "odsim/engine.hpp"
#include "odsim/metrics.hpp"

using namespace odsim;

namespace {

ContactGraph pair_graph() {
    ContactGraph g;
    g.n = 2;
    g.membership = {0, 0};
    g.edges = {{0, 1, 1.0}};
    g.rebuild_adjacency();
    return g;
}

ContactGraph complete4() {
    ContactGraph g;
    g.n = 4;
    g.membership = {0, 0, 0, 0};
    for (std::uint32_t u = 0; u < 4; ++u)
        for (std::uint32_t v = u + 1; v < 4; ++v) g.edges.push_back({u, v, 1.0});
    g.rebuild_adjacency();
    return g;
}

GraphParams desk_params() {
    GraphParams p;
    p.n = 50;
    p.n_communities = 5;
    p.minc = 8;
    p.maxc = 14;
    p.avg_degree = 8;
    p.max_degree = 16;
    p.seed = 7;
    return p;
}

struct DeskWorld {
    ContactGraph graph;
    FilePayload file;
};

const DeskWorld& desk_world() {
    static const DeskWorld world = [] {
        DeskWorld w;
        w.graph = generate_graph(desk_params());
        Rng rng = make_rng(99);
        w.file = FilePayload::random(16, 8, rng);
        return w;
    }();
    return world;
}

TrialConfig desk_config(StrategyKind strategy, const SeedingSpec& seeding,
                        std::uint64_t seed = 1234) {
    TrialConfig tc;
    tc.graph = &desk_world().graph;
    tc.file = &desk_world().file;
    tc.strategy = strategy;
    tc.seeding = seeding;
    tc.seed = seed;
    return tc;
}

const SeedingSpec kCommunity100{SeedSchemeKind::community_pct, 1.0, CentralityKind::degree};
const SeedingSpec kCommunity80{SeedSchemeKind::community_pct, 0.8, CentralityKind::degree};
const SeedingSpec kRandomSeeding{SeedSchemeKind::random_network, 1.0, CentralityKind::degree};

struct LoggedEvent {
    double t;
    std::string kind;
    std::map<std::string, std::string> fields;
};

std::vector<LoggedEvent> parse_events(const std::string& log) {
    std::vector<LoggedEvent> out;
    std::istringstream in(log);
    std::string line;
    while (std::getline(in, line)) {
        LoggedEvent ev;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const auto key = tok.substr(0, eq);
            const auto val = tok.substr(eq + 1);
            if (key == "t") ev.t = std::stod(val);
            else if (key == "ev") ev.kind = val;
            else ev.fields[key] = val;
        }
        if (!ev.kind.empty()) out.push_back(ev);
    }
    return out;
}

}  // namespace

// ------------------------------------------------------ meeting clocks

TEST_CASE("exponential clock sample means") {
    Rng rng = make_rng(1);
    const int n = 100000;
    for (const double w : {1.0, 0.001}) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = next_meeting_time(5.0, w, rng);
            CHECK(t > 5.0);
            sum += t - 5.0;
        }
        const double mean = sum / n;
        CHECK(std::abs(mean - 1.0 / w) / (1.0 / w) <= 0.02);
    }
    CHECK_THROWS_AS(next_meeting_time(0.0, 0.0, rng), std::domain_error);
    CHECK_THROWS_AS(next_meeting_time(0.0, -1.0, rng), std::domain_error);
}

TEST_CASE("pooled inter-meeting times pass a KS test against Exp(w)") {
    Rng rng = make_rng(2);
    const double w = 0.37;
    const int n = 10000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = next_meeting_time(0.0, w, rng);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = 1.0 - std::exp(-w * xs[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));  // alpha = 0.01
}

// ------------------------------------------------------ minimal systems

TEST_CASE("two nodes, one packet: the first meeting finishes the trial") {
    const auto g = pair_graph();
    Rng rng = make_rng(3);
    const auto file = FilePayload::random(1, 4, rng);
    TrialConfig tc;
    tc.graph = &g;
    tc.file = &file;
    tc.strategy = StrategyKind::epidemic_random;
    tc.seeding = kCommunity100;
    tc.seed = 77;
    const auto m = run_trial(tc);
    CHECK(m.seeded_total == 1);
    CHECK(m.transmissions_total == 1);
    CHECK(m.meetings_total == 1);
    CHECK(m.finished_count() == 2);
    CHECK_FALSE(m.truncated);
    const double finish = m.network_finish();
    CHECK(finish > 0.0);
    int at_zero = 0;
    for (const auto& t : m.finish_times)
        if (t && *t == 0.0) ++at_zero;
    CHECK(at_zero == 1);  // the seeded node holds the file from the start
}

TEST_CASE("complete graph of four nodes, k=2, full seeding: exactly six transmissions") {
    const auto g = complete4();
    Rng rng = make_rng(4);
    const auto file = FilePayload::random(2, 4, rng);
    for (int seed = 0; seed < 10; ++seed) {
        TrialConfig tc;
        tc.graph = &g;
        tc.file = &file;
        tc.strategy = StrategyKind::epidemic_random;
        tc.seeding = kCommunity100;
        tc.seed = static_cast<std::uint64_t>(seed);
        const auto m = run_trial(tc);
        CHECK(m.transmissions_total == 4 * 2 - 2);
        CHECK(m.noninnovative_total == 0);
    }
}

// ------------------------------------------------------ determinism

TEST_CASE("identical seeds give byte-identical metrics") {
    for (const auto strategy : {StrategyKind::epidemic_random, StrategyKind::nc,
                                StrategyKind::erasure, StrategyKind::flooding}) {
        const auto a = run_trial(desk_config(strategy, kCommunity80));
        const auto b = run_trial(desk_config(strategy, kCommunity80));
        CHECK(a.to_string() == b.to_string());
    }
}

TEST_CASE("experiment seeds derive as base plus trial index") {
    auto base = desk_config(StrategyKind::epidemic_random, kCommunity80, 5000);
    const auto trials = run_experiment(base, 4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        auto single = base;
        single.seed = base.seed + i;
        CHECK(trials[i].to_string() == run_trial(single).to_string());
    }
    const auto again = run_experiment(base, 4, 1);
    for (std::size_t i = 0; i < 4; ++i) CHECK(trials[i].to_string() == again[i].to_string());
}

// ------------------------------------------------------ conservation laws

TEST_CASE("epidemic transmissions equal n*k minus seeds, exactly") {
    const auto& w = desk_world();
    const std::size_t nk = w.graph.n * w.file.k;
    for (const auto strategy :
         {StrategyKind::epidemic_random, StrategyKind::epidemic_local_rarest}) {
        for (const auto& seeding : {kCommunity80, kCommunity100, kRandomSeeding}) {
            for (int s = 0; s < 3; ++s) {
                const auto m = run_trial(desk_config(strategy, seeding, 100 + s));
                REQUIRE_FALSE(m.truncated);
                CHECK(m.transmissions_total == nk - m.seeded_total);
                CHECK(m.noninnovative_total == 0);  // epidemic zero-waste
                CHECK(m.innovative_total == m.transmissions_total);
            }
        }
    }
}

TEST_CASE("nc innovative transmissions equal the epidemic total, exactly") {
    const auto& w = desk_world();
    const std::size_t nk = w.graph.n * w.file.k;
    for (const auto& seeding : {kCommunity80, kCommunity100, kRandomSeeding}) {
        for (int s = 0; s < 3; ++s) {
            const auto m = run_trial(desk_config(StrategyKind::nc, seeding, 200 + s));
            REQUIRE_FALSE(m.truncated);
            CHECK(m.innovative_total == nk - m.seeded_total);
            CHECK(m.innovative_total + m.noninnovative_total == m.transmissions_total);
        }
    }
}

TEST_CASE("flooding needs at least as many transmissions as epidemic") {
    const auto& w = desk_world();
    const std::size_t nk = w.graph.n * w.file.k;
    for (int s = 0; s < 3; ++s) {
        const auto fl = run_trial(desk_config(StrategyKind::flooding, kCommunity100, 300 + s));
        REQUIRE_FALSE(fl.truncated);
        CHECK(fl.transmissions_total >= nk - fl.seeded_total);
    }
}

TEST_CASE("per-node sent counts add up to the total") {
    const auto m = run_trial(desk_config(StrategyKind::nc, kCommunity80, 42));
    std::uint64_t sent = 0, received = 0;
    for (const auto& pn : m.per_node) {
        sent += pn.sent;
        received += pn.received;
    }
    CHECK(sent == m.transmissions_total);
    CHECK(received == m.transmissions_total);
    CHECK(m.transmissions_total <= 2 * m.meetings_total);  // one packet per direction
}

// ------------------------------------------------------ event-log audits

TEST_CASE("nobody meets a dead node and nobody receives after completion") {
    std::ostringstream log;
    auto tc = desk_config(StrategyKind::epidemic_random, kCommunity100, 900);
    tc.failure = FailureModel::parse("periodic:2.0");
    tc.max_sim_time = 500;
    tc.event_log = &log;
    const auto m = run_trial(tc);
    const auto events = parse_events(log.str());
    REQUIRE(!events.empty());

    std::map<std::uint32_t, double> died, finished;
    double last_t = 0.0;
    for (const auto& ev : events) {
        CHECK(ev.t >= last_t - 1e-12);  // event times are nondecreasing
        last_t = std::max(last_t, ev.t);
        if (ev.kind == "fail") died[std::stoul(ev.fields.at("node"))] = ev.t;
        if (ev.kind == "finish") finished[std::stoul(ev.fields.at("node"))] = ev.t;
        if (ev.kind == "meet") {
            const auto u = static_cast<std::uint32_t>(std::stoul(ev.fields.at("u")));
            const auto v = static_cast<std::uint32_t>(std::stoul(ev.fields.at("v")));
            for (const auto node : {u, v}) {
                const auto it = died.find(node);
                const bool dead_before = it != died.end() && it->second < ev.t;
                CHECK_FALSE(dead_before);
            }
            // a finished node never receives
            if (ev.fields.at("ab") == "1") {
                const auto it = finished.find(v);
                CHECK((it == finished.end() || it->second >= ev.t));
            }
            if (ev.fields.at("ba") == "1") {
                const auto it = finished.find(u);
                CHECK((it == finished.end() || it->second >= ev.t));
            }
        }
    }
    (void)m;
}

// ------------------------------------------------------ failure models

TEST_CASE("periodic failures fire on the exact schedule") {
    // an unfinishable configuration: half the packets never seeded
    GraphParams p;
    p.n = 20;
    p.minc = 20;
    p.maxc = 20;
    p.avg_degree = 6;
    p.max_degree = 10;
    p.seed = 11;
    const auto g = generate_graph(p);
    Rng rng = make_rng(5);
    const auto file = FilePayload::random(16, 4, rng);
    std::ostringstream log;
    TrialConfig tc;
    tc.graph = &g;
    tc.file = &file;
    tc.strategy = StrategyKind::epidemic_random;
    tc.seeding = SeedingSpec{SeedSchemeKind::community_pct, 0.5, CentralityKind::degree};
    tc.failure = FailureModel::parse("periodic:1.0");
    tc.max_sim_time = 10.5;
    tc.seed = 500;
    tc.event_log = &log;
    const auto m = run_trial(tc);
    CHECK(m.truncated);
    int fails = 0;
    for (const auto& ev : parse_events(log.str()))
        if (ev.kind == "fail") ++fails;
    CHECK(fails == 10);  // t = 1..10, none past the horizon
}

TEST_CASE("mcu dies right after its 40th transmission at fraction 0.5, k=80") {
    // single community star: the hub is the most central user
    ContactGraph g;
    g.n = 6;
    g.membership.assign(6, 0);
    for (std::uint32_t v = 1; v < 6; ++v) g.edges.push_back({0, v, 1.0});
    g.rebuild_adjacency();
    Rng rng = make_rng(6);
    const auto file = FilePayload::random(80, 2, rng);
    std::ostringstream log;
    TrialConfig tc;
    tc.graph = &g;
    tc.file = &file;
    tc.strategy = StrategyKind::nc;
    tc.seeding = SeedingSpec{SeedSchemeKind::s2_mcu, 1.0, CentralityKind::degree};
    tc.failure = FailureModel::parse("mcu_partial:0.5");
    tc.seed = 321;
    tc.event_log = &log;
    const auto m = run_trial(tc);
    const auto events = parse_events(log.str());

    std::uint64_t hub_sends = 0;
    bool hub_dead = false;
    for (const auto& ev : events) {
        if (ev.kind == "meet") {
            CHECK_FALSE(hub_dead);
            const auto u = std::stoul(ev.fields.at("u"));
            const auto v = std::stoul(ev.fields.at("v"));
            if (u == 0 && ev.fields.at("ab") == "1") ++hub_sends;
            if (v == 0 && ev.fields.at("ba") == "1") ++hub_sends;
        }
        if (ev.kind == "fail" && ev.fields.at("node") == "0") {
            CHECK(ev.fields.at("cause") == "mcu_partial");
            hub_dead = true;
            CHECK(hub_sends == 40);
        }
    }
    CHECK(hub_dead);
    // leaves cannot reach rank 80: the hub's death also cuts every clock
    CHECK(m.truncated);
    CHECK(m.truncated_reason == "no live meeting clocks remain");
}

TEST_CASE("structurally missing content cuts the trial off") {
    // one community of two nodes, k=2, but only one packet ever seeded
    ContactGraph g;
    g.n = 2;
    g.membership = {0, 0};
    g.edges = {{0, 1, 1.0}};
    g.rebuild_adjacency();
    Rng rng = make_rng(8);
    const auto file = FilePayload::random(2, 4, rng);
    TrialConfig tc;
    tc.graph = &g;
    tc.file = &file;
    tc.strategy = StrategyKind::epidemic_random;
    tc.seeding = SeedingSpec{SeedSchemeKind::community_pct, 0.5, CentralityKind::degree};
    tc.seed = 777;
    const auto m = run_trial(tc);
    CHECK(m.truncated);
    CHECK(m.truncated_reason == "remaining content unreachable");
    CHECK(m.finished_count() == 0);
}

TEST_CASE("max_sim_time truncates instead of throwing") {
    auto tc = desk_config(StrategyKind::epidemic_random, kCommunity80, 31);
    tc.max_sim_time = 0.001;
    const auto m = run_trial(tc);
    CHECK(m.truncated);
    CHECK(m.truncated_reason == "max_sim_time reached");
}

// ------------------------------------------------------ aggregation

TEST_CASE("single-trial aggregate equals the trial") {
    auto base = desk_config(StrategyKind::epidemic_random, kCommunity100, 808);
    const auto trials = run_experiment(base, 1, 1);
    REQUIRE(trials.size() == 1);
    const auto f = median_finish(trials);
    CHECK(f.median == doctest::Approx(trials[0].network_finish()));
    CHECK(f.stddev == doctest::Approx(0.0));
}
