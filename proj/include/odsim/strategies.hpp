#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "odsim/bitset.hpp"
#include "odsim/graph.hpp"
#include "odsim/lt.hpp"
#include "odsim/rlnc.hpp"
#include "odsim/seeding.hpp"

namespace odsim {

enum class StrategyKind { flooding, epidemic_random, epidemic_local_rarest, nc, erasure };

StrategyKind parse_strategy(const std::string& name);
std::string describe(StrategyKind kind);
PacketKind packet_kind_for(StrategyKind kind);

/// Uniformly random packet the sender holds and has not yet forwarded to
/// this peer; nullopt when there is none (the opportunity is missed).
std::optional<std::uint32_t> flooding_select(const Bitset& buffer, const Bitset& forwarded_to_peer,
                                             Rng& rng);

/// Uniform choice from S_A - S_B; nullopt when empty.
std::optional<std::uint32_t> epidemic_select_random(const Bitset& sa, const Bitset& sb, Rng& rng);

/// Receiver-driven pick from S_A - S_B minimizing the rarity count; ties
/// broken uniformly at random.
std::optional<std::uint32_t> epidemic_select_local_rarest(const Bitset& sa, const Bitset& sb,
                                                          std::span<const std::uint32_t> rarity,
                                                          Rng& rng);

struct Transfer {
    bool occurred = false;
    bool innovative = false;
    std::int64_t packet_id = -1;  // plain packet / symbol id; -1 for coded packets
};

struct ExchangeOutcome {
    Transfer ab;  // a -> b
    Transfer ba;  // b -> a
};

/// Per-trial dissemination state for all nodes. One meeting moves at most
/// one packet per direction; both directions are computed from the
/// pre-meeting state and applied together. Nodes that announced completion
/// refuse receptions but keep transmitting; dead nodes do neither.
class Strategy {
public:
    Strategy(const ContactGraph& g, std::size_t k) : g_(&g), k_(k) {}
    virtual ~Strategy() = default;

    virtual void seed(const SeedingPlan& plan, Rng& rng) = 0;
    virtual ExchangeOutcome exchange(std::uint32_t a, std::uint32_t b, Rng& rng) = 0;
    virtual bool finished(std::uint32_t v) const = 0;
    virtual void on_failure(std::uint32_t v) = 0;  // the node's buffer is lost

    /// Whether any unfinished alive node can still complete, given which
    /// nodes are alive. Used to cut off structurally stuck trials.
    virtual bool progress_possible(const std::vector<char>& alive) const = 0;

    std::size_t k() const { return k_; }

protected:
    const ContactGraph* g_;
    std::size_t k_;
};

class FloodingStrategy : public Strategy {
public:
    FloodingStrategy(const ContactGraph& g, std::size_t k);
    void seed(const SeedingPlan& plan, Rng& rng) override;
    ExchangeOutcome exchange(std::uint32_t a, std::uint32_t b, Rng& rng) override;
    bool finished(std::uint32_t v) const override;
    void on_failure(std::uint32_t v) override;
    bool progress_possible(const std::vector<char>& alive) const override;

    const Bitset& buffer(std::uint32_t v) const { return buffers_[v]; }

private:
    Bitset& forwarded(std::uint32_t from, std::uint32_t to);
    std::vector<Bitset> buffers_;
    std::vector<std::vector<std::uint32_t>> nbr_ids_;  // sorted neighbor lists
    std::vector<std::vector<Bitset>> forwarded_;       // per node, per neighbor slot
};

class EpidemicStrategy : public Strategy {
public:
    EpidemicStrategy(const ContactGraph& g, std::size_t k, bool local_rarest);
    void seed(const SeedingPlan& plan, Rng& rng) override;
    ExchangeOutcome exchange(std::uint32_t a, std::uint32_t b, Rng& rng) override;
    bool finished(std::uint32_t v) const override;
    void on_failure(std::uint32_t v) override;
    bool progress_possible(const std::vector<char>& alive) const override;

    const Bitset& buffer(std::uint32_t v) const { return buffers_[v]; }
    std::span<const std::uint32_t> rarity_view(std::uint32_t v) const { return rarity_[v]; }

private:
    void store_summary(std::uint32_t owner, std::uint32_t peer);
    bool local_rarest_;
    std::vector<Bitset> buffers_;
    std::vector<std::vector<std::uint32_t>> nbr_ids_;
    std::vector<std::vector<Bitset>> summaries_;        // last-known peer buffers
    std::vector<std::vector<std::uint32_t>> rarity_;    // aggregated summary counts
};

class NcStrategy : public Strategy {
public:
    NcStrategy(const ContactGraph& g, const FilePayload& file);
    void seed(const SeedingPlan& plan, Rng& rng) override;
    ExchangeOutcome exchange(std::uint32_t a, std::uint32_t b, Rng& rng) override;
    bool finished(std::uint32_t v) const override;
    void on_failure(std::uint32_t v) override;
    bool progress_possible(const std::vector<char>& alive) const override;

    const RlncDecoder& decoder(std::uint32_t v) const { return decoders_[v]; }

private:
    const FilePayload* file_;
    std::vector<RlncDecoder> decoders_;
};

class ErasureStrategy : public Strategy {
public:
    ErasureStrategy(const ContactGraph& g, const FilePayload& file, const SolitonParams& params);
    void seed(const SeedingPlan& plan, Rng& rng) override;
    ExchangeOutcome exchange(std::uint32_t a, std::uint32_t b, Rng& rng) override;
    bool finished(std::uint32_t v) const override;
    void on_failure(std::uint32_t v) override;
    bool progress_possible(const std::vector<char>& alive) const override;

    std::size_t recovered_count(std::uint32_t v) const { return decoders_[v].recovered_count(); }
    std::size_t symbol_universe() const { return symbols_.size(); }

private:
    void store_summary(std::uint32_t owner, std::uint32_t peer);
    const FilePayload* file_;
    SolitonParams params_;
    std::vector<LtSymbol> symbols_;  // all symbols the server ever seeded
    std::vector<Bitset> have_;
    std::vector<LtPeelDecoder> decoders_;
    std::vector<std::vector<std::uint32_t>> nbr_ids_;
    std::vector<std::vector<Bitset>> summaries_;
    std::vector<std::vector<std::uint32_t>> rarity_;
};

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, const ContactGraph& g,
                                        const FilePayload& file, const SolitonParams& lt_params);

}  // namespace odsim
