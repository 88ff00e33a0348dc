#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "odsim/rng.hpp"

namespace odsim {

/// The file being disseminated: k equally sized packets of raw bytes.
struct FilePayload {
    std::size_t k = 0;
    std::size_t packet_size = 0;
    std::vector<std::vector<std::uint8_t>> packets;

    static FilePayload random(std::size_t k, std::size_t packet_size, Rng& rng);
    void validate() const;  // throws std::invalid_argument
    bool operator==(const FilePayload&) const = default;
};

/// A network-coded packet: coefficient vector over GF(256) plus the
/// corresponding linear combination of the file packets.
struct RlncPacket {
    std::vector<std::uint8_t> coeffs;   // length k
    std::vector<std::uint8_t> payload;  // length packet_size

    bool zero_coeffs() const;
    bool operator==(const RlncPacket&) const = default;
};

/// Unit-vector packet e_index carrying file packet `index` verbatim.
RlncPacket rlnc_unit_packet(const FilePayload& file, std::size_t index);

/// Deterministic combination: out = sum_i weights[i] * buffer[i].
RlncPacket rlnc_combine(std::span<const RlncPacket> buffer, std::span<const std::uint8_t> weights);

/// Random recombination with coefficients drawn uniformly from GF(256);
/// redrawn whenever the combined coefficient vector comes out all zero.
RlncPacket rlnc_recombine(std::span<const RlncPacket> buffer, Rng& rng);

/// Incremental Gaussian decoder. Rows are kept in reduced row-echelon form,
/// so rank k means the stored payloads are the original file packets.
class RlncDecoder {
public:
    RlncDecoder() = default;
    RlncDecoder(std::size_t k, std::size_t packet_size);

    /// Feeds one coded packet; returns true iff it increased the rank.
    bool ingest(const RlncPacket& p);

    std::size_t rank() const { return rows_.size(); }
    std::size_t k() const { return k_; }
    bool complete() const { return rows_.size() == k_; }

    /// Requires complete(); reconstructs the file from the echelon rows.
    FilePayload decoded() const;

    const std::vector<RlncPacket>& rows() const { return rows_; }

    /// Random combination of the stored rows (the node's transmit buffer).
    RlncPacket recombine(Rng& rng) const { return rlnc_recombine(rows_, rng); }

    void clear();

private:
    std::size_t k_ = 0;
    std::size_t packet_size_ = 0;
    std::vector<RlncPacket> rows_;       // one row per pivot, echelon order
    std::vector<int> row_of_pivot_;      // pivot column -> index into rows_, or -1
};

}  // namespace odsim
