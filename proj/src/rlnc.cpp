#include "odsim/rlnc.hpp"

#include <algorithm>
#include <stdexcept>

#include "odsim/gf256.hpp"

namespace odsim {

FilePayload FilePayload::random(std::size_t k, std::size_t packet_size, Rng& rng) {
    FilePayload f;
    f.k = k;
    f.packet_size = packet_size;
    f.packets.resize(k);
    for (auto& p : f.packets) {
        p.resize(packet_size);
        for (auto& b : p) b = uniform_byte(rng);
    }
    f.validate();
    return f;
}

void FilePayload::validate() const {
    if (k < 1) throw std::invalid_argument("FilePayload: k must be >= 1");
    if (packets.size() != k) throw std::invalid_argument("FilePayload: packet count mismatch");
    for (const auto& p : packets)
        if (p.size() != packet_size)
            throw std::invalid_argument("FilePayload: packets must have equal length");
}

bool RlncPacket::zero_coeffs() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](std::uint8_t c) { return c == 0; });
}

RlncPacket rlnc_unit_packet(const FilePayload& file, std::size_t index) {
    if (index >= file.k) throw std::out_of_range("rlnc_unit_packet: index out of range");
    RlncPacket p;
    p.coeffs.assign(file.k, 0);
    p.coeffs[index] = 1;
    p.payload = file.packets[index];
    return p;
}

RlncPacket rlnc_combine(std::span<const RlncPacket> buffer, std::span<const std::uint8_t> weights) {
    if (buffer.empty()) throw std::invalid_argument("rlnc_combine: empty buffer");
    if (buffer.size() != weights.size())
        throw std::invalid_argument("rlnc_combine: weight count mismatch");
    const std::size_t k = buffer[0].coeffs.size();
    const std::size_t psize = buffer[0].payload.size();
    RlncPacket out;
    out.coeffs.assign(k, 0);
    out.payload.assign(psize, 0);
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        gf::axpy(out.coeffs.data(), buffer[i].coeffs.data(), k, weights[i]);
        gf::axpy(out.payload.data(), buffer[i].payload.data(), psize, weights[i]);
    }
    return out;
}

RlncPacket rlnc_recombine(std::span<const RlncPacket> buffer, Rng& rng) {
    if (buffer.empty()) throw std::invalid_argument("rlnc_recombine: empty buffer");
    std::vector<std::uint8_t> w(buffer.size());
    while (true) {
        for (auto& x : w) x = uniform_byte(rng);
        RlncPacket out = rlnc_combine(buffer, w);
        if (!out.zero_coeffs()) return out;
    }
}

RlncDecoder::RlncDecoder(std::size_t k, std::size_t packet_size)
    : k_(k), packet_size_(packet_size), row_of_pivot_(k, -1) {
    rows_.reserve(k);
}

bool RlncDecoder::ingest(const RlncPacket& p) {
    if (p.coeffs.size() != k_)
        throw std::invalid_argument("RlncDecoder: coefficient vector length mismatch");
    if (p.payload.size() != packet_size_)
        throw std::invalid_argument("RlncDecoder: payload length mismatch");

    RlncPacket r = p;
    // forward elimination against existing pivots
    for (std::size_t col = 0; col < k_; ++col) {
        const std::uint8_t c = r.coeffs[col];
        if (c == 0) continue;
        const int ri = row_of_pivot_[col];
        if (ri < 0) continue;
        const auto& row = rows_[static_cast<std::size_t>(ri)];
        gf::axpy(r.coeffs.data(), row.coeffs.data(), k_, c);
        gf::axpy(r.payload.data(), row.payload.data(), packet_size_, c);
    }
    // locate the new pivot
    std::size_t pivot = k_;
    for (std::size_t col = 0; col < k_; ++col) {
        if (r.coeffs[col] != 0) {
            pivot = col;
            break;
        }
    }
    if (pivot == k_) return false;  // in the row space already

    const std::uint8_t lead_inv = gf::inv(r.coeffs[pivot]);
    gf::scale(r.coeffs.data(), k_, lead_inv);
    gf::scale(r.payload.data(), packet_size_, lead_inv);

    // back-substitute into the stored rows to keep RREF
    for (auto& row : rows_) {
        const std::uint8_t c = row.coeffs[pivot];
        if (c == 0) continue;
        gf::axpy(row.coeffs.data(), r.coeffs.data(), k_, c);
        gf::axpy(row.payload.data(), r.payload.data(), packet_size_, c);
    }

    row_of_pivot_[pivot] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
}

FilePayload RlncDecoder::decoded() const {
    if (!complete()) throw std::logic_error("RlncDecoder: decode before rank k");
    FilePayload f;
    f.k = k_;
    f.packet_size = packet_size_;
    f.packets.resize(k_);
    for (std::size_t col = 0; col < k_; ++col)
        f.packets[col] = rows_[static_cast<std::size_t>(row_of_pivot_[col])].payload;
    return f;
}

void RlncDecoder::clear() {
    rows_.clear();
    std::fill(row_of_pivot_.begin(), row_of_pivot_.end(), -1);
}

}  // namespace odsim
