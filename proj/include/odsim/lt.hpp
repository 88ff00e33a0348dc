#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "odsim/rlnc.hpp"
#include "odsim/rng.hpp"

namespace odsim {

/// Parameters of the Robust Soliton degree distribution.
/// R = c * ln(k/delta) * sqrt(k).
struct SolitonParams {
    std::size_t k = 0;
    double c = 0.0;
    double delta = 0.5;

    double R() const;
    std::size_t spike_index() const;  // round(k / R)

    static double c_lower(std::size_t k, double delta);
    static double c_upper(std::size_t k, double delta);
    static double c_midband(std::size_t k, double delta);
    bool c_in_band() const;

    /// Number of symbols that recovers the file with probability >= 1 - delta,
    /// with the asymptotic constant fixed at one: k + ceil(ln^2(k/delta) * sqrt(k)).
    std::size_t decode_symbol_budget() const;

    void validate() const;  // throws std::invalid_argument
};

/// Ideal Soliton rho(1..k); element [d-1] is the mass at degree d.
std::vector<double> soliton_rho(std::size_t k);

/// Spike/tail component tau(1..k) of the Robust Soliton distribution.
std::vector<double> soliton_tau(const SolitonParams& params);

/// mu = (rho + tau) / beta with beta the normalizing sum. Sums to one.
std::vector<double> robust_soliton(const SolitonParams& params);

/// Normalization core shared with robust_soliton; exposed so tests can
/// force tau = 0 and recover the ideal soliton.
std::vector<double> normalize_degree_distribution(const std::vector<double>& rho,
                                                  const std::vector<double>& tau);

/// An encoding symbol: the XOR of the file packets named in `neighbors`.
struct LtSymbol {
    std::uint64_t symbol_id = 0;
    std::vector<std::uint32_t> neighbors;  // distinct indices in [0, k)
    std::vector<std::uint8_t> payload;

    bool operator==(const LtSymbol&) const = default;
};

/// Source-side encoder; every call yields a fresh symbol with a new id.
class LtEncoder {
public:
    LtEncoder(const FilePayload& file, const SolitonParams& params);

    LtSymbol next(Rng& rng);
    std::uint64_t generated() const { return next_id_; }

private:
    const FilePayload* file_;
    SolitonParams params_;
    std::vector<double> degree_cdf_;
    std::uint64_t next_id_ = 0;
};

std::size_t sample_degree(std::span<const double> cdf, Rng& rng);  // 1-based degree

/// Iterative peeling decoder with incremental ingestion. Once a symbol's
/// unresolved neighbor set drops to a single packet, that packet is
/// recovered and XOR-ed out of every other symbol that references it.
class LtPeelDecoder {
public:
    LtPeelDecoder() = default;
    LtPeelDecoder(std::size_t k, std::size_t packet_size);

    struct IngestResult {
        std::size_t newly_recovered = 0;
        bool redundant = false;  // every neighbor already recovered on arrival
    };

    /// Throws std::runtime_error if the symbol contradicts recovered data.
    IngestResult ingest(const LtSymbol& s);

    std::size_t recovered_count() const { return recovered_count_; }
    bool complete() const { return recovered_count_ == k_; }
    FilePayload decoded() const;  // requires complete()

    void clear();

private:
    struct Pending {
        std::vector<std::uint32_t> nbrs;
        std::vector<std::uint8_t> payload;
        bool dead = false;
    };

    void recover(std::uint32_t packet, std::vector<std::uint8_t>&& payload);

    std::size_t k_ = 0;
    std::size_t packet_size_ = 0;
    std::vector<std::uint8_t> have_;
    std::vector<std::vector<std::uint8_t>> packets_;
    std::vector<Pending> pending_;
    std::vector<std::vector<std::uint32_t>> index_;  // packet -> pending slots
    std::size_t recovered_count_ = 0;
};

struct LtPeelResult {
    std::optional<FilePayload> decoded;
    std::size_t recovered_count = 0;
};

/// Batch peeling over a symbol collection; result is independent of the
/// order of the symbols.
LtPeelResult lt_peel_decode(std::span<const LtSymbol> symbols, std::size_t k,
                            std::size_t packet_size);

}  // namespace odsim
