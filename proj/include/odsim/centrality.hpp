#pragma once

#include <cstdint>
#include <vector>

#include "odsim/graph.hpp"

namespace odsim {

enum class CentralityKind { degree, betweenness, closeness };

/// Normalized centralities of one community's members, computed on the
/// community-induced subgraph with shortest-path edge length 1/w (expected
/// inter-contact time). All three scores land in [0,1]; a single-member
/// community scores 1 on every measure.
struct CentralityScores {
    std::vector<std::uint32_t> nodes;  // global ids, ascending
    std::vector<double> degree_c;
    std::vector<double> betweenness_c;
    std::vector<double> closeness_c;

    double aggregate(std::size_t i) const {
        return degree_c[i] + betweenness_c[i] + closeness_c[i];
    }
    const std::vector<double>& of(CentralityKind k) const {
        switch (k) {
            case CentralityKind::degree: return degree_c;
            case CentralityKind::betweenness: return betweenness_c;
            default: return closeness_c;
        }
    }
};

/// Throws std::runtime_error if the community subgraph is disconnected
/// (closeness undefined).
CentralityScores compute_centralities(const ContactGraph& g, std::uint32_t community);

}  // namespace odsim
