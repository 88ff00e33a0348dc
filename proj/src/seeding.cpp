#include "odsim/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace odsim {

std::string SeedingSpec::describe() const {
    switch (scheme) {
        case SeedSchemeKind::community_pct: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "community_%g", pct * 100.0);
            return buf;
        }
        case SeedSchemeKind::random_network:
            return "random";
        case SeedSchemeKind::s1:
            switch (kind) {
                case CentralityKind::degree: return "s1_degree";
                case CentralityKind::betweenness: return "s1_betweenness";
                default: return "s1_closeness";
            }
        default:
            return "s2_mcu";
    }
}

SeedingSpec SeedingSpec::parse(const std::string& text) {
    SeedingSpec s;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "community") {
        s.scheme = SeedSchemeKind::community_pct;
        if (arg.empty()) throw std::invalid_argument("seeding 'community' needs a fraction, e.g. community:0.8");
        s.pct = std::stod(arg);
    } else if (head == "random") {
        s.scheme = SeedSchemeKind::random_network;
    } else if (head == "s1") {
        s.scheme = SeedSchemeKind::s1;
        if (arg == "degree") s.kind = CentralityKind::degree;
        else if (arg == "betweenness") s.kind = CentralityKind::betweenness;
        else if (arg == "closeness") s.kind = CentralityKind::closeness;
        else throw std::invalid_argument("seeding 's1' needs degree|betweenness|closeness");
    } else if (head == "s2" || head == "s2_mcu" || head == "mcu") {
        s.scheme = SeedSchemeKind::s2_mcu;
    } else {
        throw std::invalid_argument("unknown seeding scheme '" + text + "'");
    }
    return s;
}

std::vector<std::size_t> SeedingPlan::allocation_counts(std::size_t n) const {
    std::vector<std::size_t> counts(n, 0);
    for (const auto& gr : grants) counts[gr.node]++;
    return counts;
}

namespace {

/// Places `indices` one by one on uniformly random nodes from `pool`.
/// For plain/RLNC packets a node never receives the same index twice.
void place_grants(SeedingPlan& plan, const std::vector<std::uint32_t>& pool,
                  const std::vector<std::uint32_t>& indices, PacketKind kind, Rng& rng) {
    std::unordered_set<std::uint64_t> taken;  // (node, index) pairs already granted
    const std::size_t budget = 1000 * indices.size() + 1000;
    std::size_t draws = 0;
    for (const auto idx : indices) {
        while (true) {
            if (++draws > budget)
                throw std::runtime_error(
                    "seeding: cannot place distinct packet copies (community too small for this "
                    "seeding percentage)");
            const auto node = pool[uniform_index(rng, pool.size())];
            if (kind != PacketKind::lt) {
                const std::uint64_t key = (static_cast<std::uint64_t>(node) << 32) | idx;
                if (taken.count(key)) continue;
                taken.insert(key);
            }
            plan.grants.push_back({node, idx});
            break;
        }
    }
}

/// Index multiset for m grants over packets 0..k-1: whole copies of every
/// index plus a random subset for the partial cycle.
std::vector<std::uint32_t> cycle_indices(std::size_t m, std::size_t k, Rng& rng) {
    std::vector<std::uint32_t> indices;
    indices.reserve(m);
    const std::size_t full = m / k, rem = m % k;
    for (std::size_t c = 0; c < full; ++c)
        for (std::size_t i = 0; i < k; ++i) indices.push_back(static_cast<std::uint32_t>(i));
    if (rem > 0) {
        std::vector<std::uint32_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = k - 1; i > 0; --i) std::swap(perm[i], perm[uniform_index(rng, i + 1)]);
        indices.insert(indices.end(), perm.begin(), perm.begin() + static_cast<long>(rem));
    }
    return indices;
}

}  // namespace

SeedingPlan seed_community_pct(const ContactGraph& g, std::size_t k, double p, PacketKind kind,
                               Rng& rng) {
    if (p <= 0.0) throw std::invalid_argument("seed_community_pct: percentage must be positive");
    if (k < 1) throw std::invalid_argument("seed_community_pct: k must be >= 1");
    SeedingPlan plan{SeedSchemeKind::community_pct, {}};
    const auto members = g.community_members();
    const auto m = static_cast<std::size_t>(std::llround(p * static_cast<double>(k)));
    for (const auto& pool : members) {
        if (pool.empty()) throw std::invalid_argument("seed_community_pct: empty community");
        place_grants(plan, pool, cycle_indices(m, k, rng), kind, rng);
    }
    return plan;
}

SeedingPlan seed_random_network(const ContactGraph& g, std::size_t k, PacketKind kind, Rng& rng) {
    SeedingPlan plan{SeedSchemeKind::random_network, {}};
    std::vector<std::uint32_t> pool(g.n);
    std::iota(pool.begin(), pool.end(), 0);
    const std::size_t copies = g.community_count();
    std::vector<std::uint32_t> indices;
    indices.reserve(copies * k);
    for (std::size_t c = 0; c < copies; ++c)
        for (std::size_t i = 0; i < k; ++i) indices.push_back(static_cast<std::uint32_t>(i));
    place_grants(plan, pool, indices, kind, rng);
    return plan;
}

std::vector<std::size_t> s1_allocate(const CentralityScores& scores, CentralityKind kind,
                                     std::size_t k) {
    const auto& c = scores.of(kind);
    const double sum = std::accumulate(c.begin(), c.end(), 0.0);
    if (sum <= 0.0) throw std::invalid_argument("s1_allocate: centralities sum to zero");

    // largest-remainder rounding keeps the community total at exactly k
    std::vector<std::size_t> counts(c.size());
    std::vector<std::pair<double, std::size_t>> remainders(c.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double exact = c[i] / sum * static_cast<double>(k);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        remainders[i] = {exact - std::floor(exact), i};
        assigned += counts[i];
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t j = 0; assigned < k; ++j, ++assigned) counts[remainders[j % c.size()].second]++;
    return counts;
}

SeedingPlan seed_s1(const ContactGraph& g, std::size_t k, CentralityKind kind) {
    SeedingPlan plan{SeedSchemeKind::s1, {}};
    const std::size_t nc = g.community_count();
    for (std::uint32_t c = 0; c < nc; ++c) {
        const auto scores = compute_centralities(g, c);
        const auto counts = s1_allocate(scores, kind, k);
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < scores.nodes.size(); ++i)
            for (std::size_t j = 0; j < counts[i]; ++j)
                plan.grants.push_back({scores.nodes[i], next++});
    }
    return plan;
}

std::uint32_t select_mcu(const CentralityScores& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.nodes.size(); ++i)
        if (scores.aggregate(i) > scores.aggregate(best)) best = i;
    return scores.nodes[best];  // nodes ascending, so ties go to the lowest id
}

SeedingPlan seed_s2_mcu(const ContactGraph& g, std::size_t k) {
    SeedingPlan plan{SeedSchemeKind::s2_mcu, {}};
    for (const auto mcu : mcu_per_community(g))
        for (std::size_t i = 0; i < k; ++i)
            plan.grants.push_back({mcu, static_cast<std::uint32_t>(i)});
    return plan;
}

std::vector<std::uint32_t> mcu_per_community(const ContactGraph& g) {
    std::vector<std::uint32_t> out;
    const std::size_t nc = g.community_count();
    out.reserve(nc);
    for (std::uint32_t c = 0; c < nc; ++c) out.push_back(select_mcu(compute_centralities(g, c)));
    return out;
}

SeedingPlan build_plan(const ContactGraph& g, const SeedingSpec& spec, std::size_t k,
                       PacketKind kind, Rng& rng) {
    switch (spec.scheme) {
        case SeedSchemeKind::community_pct:
            return seed_community_pct(g, k, spec.pct, kind, rng);
        case SeedSchemeKind::random_network:
            return seed_random_network(g, k, kind, rng);
        case SeedSchemeKind::s1:
            return seed_s1(g, k, spec.kind);
        default:
            return seed_s2_mcu(g, k);
    }
}

}  // namespace odsim
