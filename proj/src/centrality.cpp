#include "odsim/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace odsim {

CentralityScores compute_centralities(const ContactGraph& g, std::uint32_t community) {
    CentralityScores out;
    for (std::uint32_t v = 0; v < g.n; ++v)
        if (g.membership[v] == community) out.nodes.push_back(v);
    const std::size_t m = out.nodes.size();
    if (m == 0) throw std::invalid_argument("compute_centralities: empty community");

    if (m == 1) {
        out.degree_c = {1.0};
        out.betweenness_c = {1.0};
        out.closeness_c = {1.0};
        return out;
    }

    std::vector<std::size_t> local(g.n, SIZE_MAX);
    for (std::size_t i = 0; i < m; ++i) local[out.nodes[i]] = i;

    // community-induced subgraph, edge length = mean inter-contact time 1/w
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (const auto& [nb, w] : g.adj[out.nodes[i]]) {
            const auto j = local[nb];
            if (j != SIZE_MAX) adj[i].emplace_back(j, 1.0 / w);
        }
    }

    out.degree_c.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        out.degree_c[i] = static_cast<double>(adj[i].size()) / static_cast<double>(m - 1);

    // Brandes accumulation over weighted shortest paths
    std::vector<double> betw(m, 0.0);
    std::vector<double> closeness(m, 0.0);
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> dist(m);
    std::vector<double> sigma(m);
    std::vector<double> delta(m);
    std::vector<std::vector<std::size_t>> preds(m);
    std::vector<std::size_t> pop_order;

    for (std::size_t s = 0; s < m; ++s) {
        std::fill(dist.begin(), dist.end(), inf);
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) p.clear();
        pop_order.clear();

        using QItem = std::pair<double, std::size_t>;
        std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
        dist[s] = 0.0;
        sigma[s] = 1.0;
        pq.emplace(0.0, s);
        std::vector<char> done(m, 0);
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = 1;
            pop_order.push_back(u);
            for (const auto& [v, len] : adj[u]) {
                const double nd = d + len;
                if (dist[v] == inf) {
                    dist[v] = nd;
                    sigma[v] = sigma[u];
                    preds[v].assign(1, u);
                    pq.emplace(nd, v);
                    continue;
                }
                const double eps = 1e-12 * (1.0 + dist[v]);
                if (nd < dist[v] - eps) {
                    dist[v] = nd;
                    sigma[v] = sigma[u];
                    preds[v].assign(1, u);
                    pq.emplace(nd, v);
                } else if (std::abs(nd - dist[v]) <= eps) {
                    sigma[v] += sigma[u];
                    preds[v].push_back(u);
                }
            }
        }
        if (pop_order.size() != m)
            throw std::runtime_error("compute_centralities: community " +
                                     std::to_string(community) +
                                     " subgraph disconnected, closeness undefined");

        double dsum = 0.0;
        for (std::size_t v = 0; v < m; ++v) dsum += dist[v];
        closeness[s] = static_cast<double>(m - 1) / dsum;  // (1/sum) * (m-1)
        // rescaled below so the top score is 1: weighted distances carry
        // time units, and the [0,1] range must survive weight rescaling

        for (auto it = pop_order.rbegin(); it != pop_order.rend(); ++it) {
            const auto w = *it;
            for (const auto p : preds[w])
                delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
            if (w != s) betw[w] += delta[w];
        }
    }

    out.betweenness_c.resize(m);
    if (m >= 3) {
        // each unordered pair counted from both endpoints
        const double norm = static_cast<double>(m - 1) * static_cast<double>(m - 2);
        for (std::size_t i = 0; i < m; ++i) out.betweenness_c[i] = betw[i] / norm;
    } else {
        std::fill(out.betweenness_c.begin(), out.betweenness_c.end(), 0.0);
    }
    const double cmax = *std::max_element(closeness.begin(), closeness.end());
    if (cmax > 0.0)
        for (auto& c : closeness) c /= cmax;
    out.closeness_c = std::move(closeness);
    return out;
}

}  // namespace odsim
