#include "odsim/strategies.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace odsim {

StrategyKind parse_strategy(const std::string& name) {
    if (name == "flooding") return StrategyKind::flooding;
    if (name == "epidemic_random") return StrategyKind::epidemic_random;
    if (name == "epidemic_local_rarest") return StrategyKind::epidemic_local_rarest;
    if (name == "nc") return StrategyKind::nc;
    if (name == "erasure") return StrategyKind::erasure;
    throw std::invalid_argument("unknown strategy '" + name + "'");
}

std::string describe(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::flooding: return "flooding";
        case StrategyKind::epidemic_random: return "epidemic_random";
        case StrategyKind::epidemic_local_rarest: return "epidemic_local_rarest";
        case StrategyKind::nc: return "nc";
        default: return "erasure";
    }
}

PacketKind packet_kind_for(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::nc: return PacketKind::rlnc;
        case StrategyKind::erasure: return PacketKind::lt;
        default: return PacketKind::plain;
    }
}

std::optional<std::uint32_t> flooding_select(const Bitset& buffer, const Bitset& forwarded_to_peer,
                                             Rng& rng) {
    const std::size_t pick = buffer.pick_andnot(forwarded_to_peer, rng);
    if (pick == buffer.capacity()) return std::nullopt;
    return static_cast<std::uint32_t>(pick);
}

std::optional<std::uint32_t> epidemic_select_random(const Bitset& sa, const Bitset& sb, Rng& rng) {
    const std::size_t pick = sa.pick_andnot(sb, rng);
    if (pick == sa.capacity()) return std::nullopt;
    return static_cast<std::uint32_t>(pick);
}

std::optional<std::uint32_t> epidemic_select_local_rarest(const Bitset& sa, const Bitset& sb,
                                                          std::span<const std::uint32_t> rarity,
                                                          Rng& rng) {
    std::optional<std::uint32_t> best;
    std::uint32_t best_count = 0;
    std::size_t ties = 0;
    sa.for_each_andnot(sb, [&](std::size_t id) {
        const std::uint32_t c = rarity[id];
        if (!best || c < best_count) {
            best = static_cast<std::uint32_t>(id);
            best_count = c;
            ties = 1;
        } else if (c == best_count) {
            ++ties;
            if (uniform_index(rng, ties) == 0) best = static_cast<std::uint32_t>(id);
        }
    });
    return best;
}

namespace {

std::vector<std::vector<std::uint32_t>> sorted_neighbors(const ContactGraph& g) {
    std::vector<std::vector<std::uint32_t>> out(g.n);
    for (std::uint32_t v = 0; v < g.n; ++v) {
        out[v].reserve(g.adj[v].size());
        for (const auto& [nb, w] : g.adj[v]) out[v].push_back(nb);
        std::sort(out[v].begin(), out[v].end());
    }
    return out;
}

std::size_t slot_of(const std::vector<std::uint32_t>& nbrs, std::uint32_t peer) {
    const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), peer);
    if (it == nbrs.end() || *it != peer)
        throw std::logic_error("strategy: meeting between non-adjacent nodes");
    return static_cast<std::size_t>(it - nbrs.begin());
}

/// Union-find over edges whose endpoints are both alive.
std::vector<std::uint32_t> alive_components(const ContactGraph& g, const std::vector<char>& alive) {
    std::vector<std::uint32_t> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : g.edges)
        if (alive[e.u] && alive[e.v]) parent[find(e.u)] = find(e.v);
    for (std::uint32_t v = 0; v < g.n; ++v) parent[v] = find(v);
    return parent;
}

}  // namespace

// ---------------------------------------------------------------- flooding

FloodingStrategy::FloodingStrategy(const ContactGraph& g, std::size_t k)
    : Strategy(g, k), buffers_(g.n, Bitset(k)), nbr_ids_(sorted_neighbors(g)), forwarded_(g.n) {
    for (std::uint32_t v = 0; v < g.n; ++v)
        forwarded_[v].assign(nbr_ids_[v].size(), Bitset(k));
}

Bitset& FloodingStrategy::forwarded(std::uint32_t from, std::uint32_t to) {
    return forwarded_[from][slot_of(nbr_ids_[from], to)];
}

void FloodingStrategy::seed(const SeedingPlan& plan, Rng&) {
    for (const auto& gr : plan.grants) buffers_[gr.node].set(gr.index);
}

ExchangeOutcome FloodingStrategy::exchange(std::uint32_t a, std::uint32_t b, Rng& rng) {
    const bool fin_a = finished(a), fin_b = finished(b);
    std::optional<std::uint32_t> sel_ab, sel_ba;
    if (!fin_b) sel_ab = flooding_select(buffers_[a], forwarded(a, b), rng);
    if (!fin_a) sel_ba = flooding_select(buffers_[b], forwarded(b, a), rng);

    ExchangeOutcome out;
    if (sel_ab) {
        forwarded(a, b).set(*sel_ab);
        out.ab.occurred = true;
        out.ab.packet_id = *sel_ab;
        out.ab.innovative = !buffers_[b].test(*sel_ab);
        buffers_[b].set(*sel_ab);
    }
    if (sel_ba) {
        forwarded(b, a).set(*sel_ba);
        out.ba.occurred = true;
        out.ba.packet_id = *sel_ba;
        out.ba.innovative = !buffers_[a].test(*sel_ba);
        buffers_[a].set(*sel_ba);
    }
    return out;
}

bool FloodingStrategy::finished(std::uint32_t v) const { return buffers_[v].count() == k_; }

void FloodingStrategy::on_failure(std::uint32_t v) { buffers_[v].clear(); }

bool FloodingStrategy::progress_possible(const std::vector<char>& alive) const {
    const auto comp = alive_components(*g_, alive);
    std::vector<Bitset> unions;
    std::vector<std::uint32_t> roots;
    auto union_of = [&](std::uint32_t root) -> Bitset& {
        for (std::size_t i = 0; i < roots.size(); ++i)
            if (roots[i] == root) return unions[i];
        roots.push_back(root);
        unions.emplace_back(k_);
        for (std::uint32_t v = 0; v < g_->n; ++v)
            if (alive[v] && comp[v] == root) unions.back().or_with(buffers_[v]);
        return unions.back();
    };
    for (std::uint32_t v = 0; v < g_->n; ++v) {
        if (!alive[v] || finished(v)) continue;
        if (union_of(comp[v]).count() < k_) return false;
    }
    return true;
}

// ---------------------------------------------------------------- epidemic

EpidemicStrategy::EpidemicStrategy(const ContactGraph& g, std::size_t k, bool local_rarest)
    : Strategy(g, k), local_rarest_(local_rarest), buffers_(g.n, Bitset(k)) {
    if (local_rarest_) {
        nbr_ids_ = sorted_neighbors(g);
        summaries_.resize(g.n);
        rarity_.assign(g.n, std::vector<std::uint32_t>(k, 0));
        for (std::uint32_t v = 0; v < g.n; ++v)
            summaries_[v].assign(nbr_ids_[v].size(), Bitset(k));
    }
}

void EpidemicStrategy::seed(const SeedingPlan& plan, Rng&) {
    for (const auto& gr : plan.grants) buffers_[gr.node].set(gr.index);
}

void EpidemicStrategy::store_summary(std::uint32_t owner, std::uint32_t peer) {
    const auto slot = slot_of(nbr_ids_[owner], peer);
    Bitset& summary = summaries_[owner][slot];
    // buffers only grow, so the diff is what the peer gained since last time
    buffers_[peer].for_each_andnot(summary, [&](std::size_t id) { rarity_[owner][id]++; });
    summary = buffers_[peer];
}

ExchangeOutcome EpidemicStrategy::exchange(std::uint32_t a, std::uint32_t b, Rng& rng) {
    const bool fin_a = finished(a), fin_b = finished(b);
    std::optional<std::uint32_t> sel_ab, sel_ba;
    if (!fin_b) {
        sel_ab = local_rarest_
                     ? epidemic_select_local_rarest(buffers_[a], buffers_[b], rarity_[b], rng)
                     : epidemic_select_random(buffers_[a], buffers_[b], rng);
    }
    if (!fin_a) {
        sel_ba = local_rarest_
                     ? epidemic_select_local_rarest(buffers_[b], buffers_[a], rarity_[a], rng)
                     : epidemic_select_random(buffers_[b], buffers_[a], rng);
    }

    ExchangeOutcome out;
    if (sel_ab) {
        out.ab = {true, true, *sel_ab};
        buffers_[b].set(*sel_ab);
    }
    if (sel_ba) {
        out.ba = {true, true, *sel_ba};
        buffers_[a].set(*sel_ba);
    }
    if (local_rarest_) {
        store_summary(a, b);
        store_summary(b, a);
    }
    return out;
}

bool EpidemicStrategy::finished(std::uint32_t v) const { return buffers_[v].count() == k_; }

void EpidemicStrategy::on_failure(std::uint32_t v) { buffers_[v].clear(); }

bool EpidemicStrategy::progress_possible(const std::vector<char>& alive) const {
    const auto comp = alive_components(*g_, alive);
    for (std::uint32_t v = 0; v < g_->n; ++v) {
        if (!alive[v] || finished(v)) continue;
        Bitset u(k_);
        for (std::uint32_t w = 0; w < g_->n; ++w)
            if (alive[w] && comp[w] == comp[v]) u.or_with(buffers_[w]);
        if (u.count() < k_) return false;
    }
    return true;
}

// ---------------------------------------------------------------- network coding

NcStrategy::NcStrategy(const ContactGraph& g, const FilePayload& file)
    : Strategy(g, file.k), file_(&file) {
    decoders_.reserve(g.n);
    for (std::size_t v = 0; v < g.n; ++v) decoders_.emplace_back(file.k, file.packet_size);
}

void NcStrategy::seed(const SeedingPlan& plan, Rng&) {
    for (const auto& gr : plan.grants) {
        const bool innovative = decoders_[gr.node].ingest(rlnc_unit_packet(*file_, gr.index));
        if (!innovative)
            throw std::logic_error("NcStrategy: seeding placed a dependent packet");
    }
}

ExchangeOutcome NcStrategy::exchange(std::uint32_t a, std::uint32_t b, Rng& rng) {
    const bool fin_a = finished(a), fin_b = finished(b);
    // both directions drawn from pre-meeting buffers
    std::optional<RlncPacket> pkt_ab, pkt_ba;
    if (!fin_b && decoders_[a].rank() > 0) pkt_ab = decoders_[a].recombine(rng);
    if (!fin_a && decoders_[b].rank() > 0) pkt_ba = decoders_[b].recombine(rng);

    ExchangeOutcome out;
    if (pkt_ab) {
        out.ab.occurred = true;
        out.ab.innovative = decoders_[b].ingest(*pkt_ab);
        if (decoders_[b].complete() && !(decoders_[b].decoded() == *file_))
            throw std::runtime_error("NcStrategy: decoded file mismatch");
    }
    if (pkt_ba) {
        out.ba.occurred = true;
        out.ba.innovative = decoders_[a].ingest(*pkt_ba);
        if (decoders_[a].complete() && !(decoders_[a].decoded() == *file_))
            throw std::runtime_error("NcStrategy: decoded file mismatch");
    }
    return out;
}

bool NcStrategy::finished(std::uint32_t v) const { return decoders_[v].complete(); }

void NcStrategy::on_failure(std::uint32_t v) { decoders_[v].clear(); }

bool NcStrategy::progress_possible(const std::vector<char>& alive) const {
    const auto comp = alive_components(*g_, alive);
    std::vector<std::uint32_t> pending_roots;
    for (std::uint32_t v = 0; v < g_->n; ++v) {
        if (!alive[v] || finished(v)) continue;
        if (std::find(pending_roots.begin(), pending_roots.end(), comp[v]) == pending_roots.end())
            pending_roots.push_back(comp[v]);
    }
    for (const auto root : pending_roots) {
        RlncDecoder probe(k_, file_->packet_size);
        for (std::uint32_t w = 0; w < g_->n && !probe.complete(); ++w) {
            if (!alive[w] || comp[w] != root) continue;
            for (const auto& row : decoders_[w].rows()) {
                probe.ingest(row);
                if (probe.complete()) break;
            }
        }
        if (!probe.complete()) return false;
    }
    return true;
}

// ---------------------------------------------------------------- erasure (LT)

ErasureStrategy::ErasureStrategy(const ContactGraph& g, const FilePayload& file,
                                 const SolitonParams& params)
    : Strategy(g, file.k), file_(&file), params_(params), nbr_ids_(sorted_neighbors(g)) {
    params_.validate();
}

void ErasureStrategy::seed(const SeedingPlan& plan, Rng& rng) {
    LtEncoder enc(*file_, params_);
    symbols_.reserve(plan.total());
    for (std::size_t i = 0; i < plan.total(); ++i) symbols_.push_back(enc.next(rng));

    const std::size_t universe = symbols_.size();
    have_.assign(g_->n, Bitset(universe));
    decoders_.clear();
    decoders_.reserve(g_->n);
    for (std::size_t v = 0; v < g_->n; ++v) decoders_.emplace_back(k_, file_->packet_size);
    summaries_.assign(g_->n, {});
    rarity_.assign(g_->n, std::vector<std::uint32_t>(universe, 0));
    for (std::uint32_t v = 0; v < g_->n; ++v)
        summaries_[v].assign(nbr_ids_[v].size(), Bitset(universe));

    for (std::size_t i = 0; i < plan.grants.size(); ++i) {
        const auto node = plan.grants[i].node;
        have_[node].set(i);
        decoders_[node].ingest(symbols_[i]);
    }
}

void ErasureStrategy::store_summary(std::uint32_t owner, std::uint32_t peer) {
    const auto slot = slot_of(nbr_ids_[owner], peer);
    Bitset& summary = summaries_[owner][slot];
    have_[peer].for_each_andnot(summary, [&](std::size_t id) { rarity_[owner][id]++; });
    summary = have_[peer];
}

ExchangeOutcome ErasureStrategy::exchange(std::uint32_t a, std::uint32_t b, Rng& rng) {
    const bool fin_a = finished(a), fin_b = finished(b);
    std::optional<std::uint32_t> sel_ab, sel_ba;
    if (!fin_b) sel_ab = epidemic_select_local_rarest(have_[a], have_[b], rarity_[b], rng);
    if (!fin_a) sel_ba = epidemic_select_local_rarest(have_[b], have_[a], rarity_[a], rng);

    ExchangeOutcome out;
    if (sel_ab) {
        out.ab.occurred = true;
        out.ab.packet_id = *sel_ab;
        have_[b].set(*sel_ab);
        const auto res = decoders_[b].ingest(symbols_[*sel_ab]);
        out.ab.innovative = !res.redundant;
        if (decoders_[b].complete() && !(decoders_[b].decoded() == *file_))
            throw std::runtime_error("ErasureStrategy: decoded file mismatch");
    }
    if (sel_ba) {
        out.ba.occurred = true;
        out.ba.packet_id = *sel_ba;
        have_[a].set(*sel_ba);
        const auto res = decoders_[a].ingest(symbols_[*sel_ba]);
        out.ba.innovative = !res.redundant;
        if (decoders_[a].complete() && !(decoders_[a].decoded() == *file_))
            throw std::runtime_error("ErasureStrategy: decoded file mismatch");
    }
    store_summary(a, b);
    store_summary(b, a);
    return out;
}

bool ErasureStrategy::finished(std::uint32_t v) const { return decoders_[v].complete(); }

void ErasureStrategy::on_failure(std::uint32_t v) {
    have_[v].clear();
    decoders_[v].clear();
}

bool ErasureStrategy::progress_possible(const std::vector<char>& alive) const {
    const auto comp = alive_components(*g_, alive);
    std::vector<std::uint32_t> pending_roots;
    for (std::uint32_t v = 0; v < g_->n; ++v) {
        if (!alive[v] || finished(v)) continue;
        if (std::find(pending_roots.begin(), pending_roots.end(), comp[v]) == pending_roots.end())
            pending_roots.push_back(comp[v]);
    }
    for (const auto root : pending_roots) {
        Bitset u(symbols_.size());
        for (std::uint32_t w = 0; w < g_->n; ++w)
            if (alive[w] && comp[w] == root) u.or_with(have_[w]);
        std::vector<LtSymbol> pool;
        u.for_each([&](std::size_t id) { pool.push_back(symbols_[id]); });
        const auto res = lt_peel_decode(pool, k_, file_->packet_size);
        if (!res.decoded) return false;
    }
    return true;
}

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const ContactGraph& g,
                                        const FilePayload& file, const SolitonParams& lt_params) {
    switch (kind) {
        case StrategyKind::flooding:
            return std::make_unique<FloodingStrategy>(g, file.k);
        case StrategyKind::epidemic_random:
            return std::make_unique<EpidemicStrategy>(g, file.k, false);
        case StrategyKind::epidemic_local_rarest:
            return std::make_unique<EpidemicStrategy>(g, file.k, true);
        case StrategyKind::nc:
            return std::make_unique<NcStrategy>(g, file);
        default:
            return std::make_unique<ErasureStrategy>(g, file, lt_params);
    }
}

}  // namespace odsim
