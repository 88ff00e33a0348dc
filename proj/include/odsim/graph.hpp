#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odsim/rng.hpp"

namespace odsim {

/// Parameters for the community contact-graph generator. Degrees and
/// community sizes follow truncated power laws; mu_t splits each node's
/// edges between its community and the rest of the network; mu_w splits
/// its meeting-rate strength the same way.
struct GraphParams {
    std::size_t n = 200;
    double avg_degree = 10.0;
    std::size_t max_degree = 50;
    double gamma = 2.0;              // degree power-law exponent
    double community_exponent = 1.5; // community-size power-law exponent, in [1,2]
    std::size_t minc = 10;
    std::size_t maxc = 50;
    std::optional<std::size_t> n_communities;  // force an exact community count
    double mu_t = 0.1;
    double mu_w = 0.001;
    double beta = 1.0;  // strength exponent, s_i = degree^beta
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument
};

/// Weighted undirected contact graph with hard community membership.
/// Edge weights are pairwise meeting rates (events per unit time).
struct ContactGraph {
    struct Edge {
        std::uint32_t u, v;  // u < v
        double w;
        bool operator==(const Edge&) const = default;
    };

    std::size_t n = 0;
    std::vector<std::uint32_t> membership;  // node -> community id
    std::vector<Edge> edges;                // sorted by (u, v)
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;

    std::size_t community_count() const;
    std::size_t degree(std::uint32_t node) const { return adj[node].size(); }
    std::vector<std::vector<std::uint32_t>> community_members() const;
    void rebuild_adjacency();

    bool operator==(const ContactGraph& o) const {
        return n == o.n && membership == o.membership && edges == o.edges;
    }
};

struct GenStats {
    std::size_t communities = 0;
    std::size_t edge_count = 0;
    double realized_inter_edge_fraction = 0.0;
    double realized_weight_mix = 0.0;  // share of total strength on inter edges
    std::size_t clamped_nodes = 0;     // internal target cut to community capacity
    std::size_t dropped_stub_pairs = 0;
    double weight_residual_p95 = 0.0;  // 95th percentile of relative strength residual
    bool globally_connected = false;
};

/// Degree sequence with mean within 10% of avg_degree (resampled up to a
/// bounded retry budget) and an even sum.
std::vector<std::size_t> sample_degree_sequence(const GraphParams& params, Rng& rng);

/// Community sizes in [minc, maxc] summing exactly to n.
std::vector<std::size_t> sample_community_sizes(const GraphParams& params, Rng& rng);

/// Unweighted topology (unit weights): configuration-model stub matching
/// with community-aware rewiring; every community's induced subgraph comes
/// out connected.
ContactGraph build_topology(const std::vector<std::size_t>& degrees,
                            const std::vector<std::size_t>& sizes, double mu_t, Rng& rng,
                            GenStats* stats = nullptr);

/// Assigns meeting-rate weights so each node's intra/inter weight sums track
/// (1-mu_w)*s and mu_w*s, s = degree^beta. Proportional initialization plus
/// bounded residual-rebalancing sweeps; all weights floored at 1e-6.
void assign_weights(ContactGraph& g, double mu_w, double beta, GenStats* stats = nullptr);

ContactGraph generate_graph(const GraphParams& params, GenStats* stats = nullptr);

/// Mean inter-contact interval of an edge with meeting rate w.
double mean_intercontact(double w);

/// Hard checks: undirected single edges, no self-loops, positive weights,
/// full membership, every community subgraph connected.
void validate_graph(const ContactGraph& g);

bool globally_connected(const ContactGraph& g);

ContactGraph load_graph(const std::string& path);
void save_graph(const ContactGraph& g, const std::string& path);

}  // namespace odsim
