#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odsim/centrality.hpp"
#include "odsim/graph.hpp"
#include "odsim/rng.hpp"

namespace odsim {

/// What kind of packets a seeding plan hands out. Plain packets and RLNC
/// unit combinations carry a concrete packet index; LT grants stand for
/// fresh symbols drawn at trial start.
enum class PacketKind { plain, rlnc, lt };

enum class SeedSchemeKind { community_pct, random_network, s1, s2_mcu };

struct SeedingSpec {
    SeedSchemeKind scheme = SeedSchemeKind::community_pct;
    double pct = 1.0;                       // community_pct only
    CentralityKind kind = CentralityKind::degree;  // s1 only

    std::string describe() const;
    static SeedingSpec parse(const std::string& text);  // e.g. "community:0.8", "s1:degree"
};

struct SeedGrant {
    std::uint32_t node;
    std::uint32_t index;  // packet index; ignored for PacketKind::lt
};

/// Concrete base-station allocation at t=0. For plain and RLNC packets no
/// node ever receives two copies of the same index, so the grant count is
/// exactly the information injected (what the transmission-conservation
/// identities rely on).
struct SeedingPlan {
    SeedSchemeKind scheme;
    std::vector<SeedGrant> grants;

    std::size_t total() const { return grants.size(); }
    std::vector<std::size_t> allocation_counts(std::size_t n) const;
};

SeedingPlan seed_community_pct(const ContactGraph& g, std::size_t k, double p, PacketKind kind,
                               Rng& rng);
SeedingPlan seed_random_network(const ContactGraph& g, std::size_t k, PacketKind kind, Rng& rng);

/// S1: per community, packet counts proportional to the chosen centrality,
/// rounded with largest-remainder correction so each community receives
/// exactly k packets.
std::vector<std::size_t> s1_allocate(const CentralityScores& scores, CentralityKind kind,
                                     std::size_t k);
SeedingPlan seed_s1(const ContactGraph& g, std::size_t k, CentralityKind kind);

/// Most central user: argmax of the summed normalized centralities,
/// ties broken by lowest node id.
std::uint32_t select_mcu(const CentralityScores& scores);
SeedingPlan seed_s2_mcu(const ContactGraph& g, std::size_t k);

SeedingPlan build_plan(const ContactGraph& g, const SeedingSpec& spec, std::size_t k,
                       PacketKind kind, Rng& rng);

/// Per-community MCU node ids (used by the MCU failure model).
std::vector<std::uint32_t> mcu_per_community(const ContactGraph& g);

}  // namespace odsim
