#include "odsim/lt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace odsim {

double SolitonParams::R() const {
    return c * std::log(static_cast<double>(k) / delta) * std::sqrt(static_cast<double>(k));
}

std::size_t SolitonParams::spike_index() const {
    const double s = std::round(static_cast<double>(k) / R());
    return static_cast<std::size_t>(std::max(1.0, std::min(s, static_cast<double>(k))));
}

double SolitonParams::c_lower(std::size_t k, double delta) {
    return std::sqrt(static_cast<double>(k)) /
           (static_cast<double>(k - 1) * std::log(static_cast<double>(k) / delta));
}

double SolitonParams::c_upper(std::size_t k, double delta) {
    return 0.5 * std::sqrt(static_cast<double>(k)) / std::log(static_cast<double>(k) / delta);
}

double SolitonParams::c_midband(std::size_t k, double delta) {
    return 0.5 * (c_lower(k, delta) + c_upper(k, delta));
}

bool SolitonParams::c_in_band() const {
    return c >= c_lower(k, delta) && c <= c_upper(k, delta);
}

std::size_t SolitonParams::decode_symbol_budget() const {
    const double l = std::log(static_cast<double>(k) / delta);
    return k + static_cast<std::size_t>(std::ceil(l * l * std::sqrt(static_cast<double>(k))));
}

void SolitonParams::validate() const {
    if (k < 2) throw std::invalid_argument("SolitonParams: k must be >= 2");
    if (c <= 0.0) throw std::invalid_argument("SolitonParams: c must be positive");
    if (delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("SolitonParams: delta must lie in (0,1)");
    if (static_cast<double>(k) / R() < 1.0)
        throw std::invalid_argument("SolitonParams: k/R < 1, distribution undefined");
    if (std::log(R() / delta) < 0.0)
        throw std::invalid_argument("SolitonParams: c too small, spike mass negative");
}

std::vector<double> soliton_rho(std::size_t k) {
    if (k < 1) throw std::invalid_argument("soliton_rho: k must be >= 1");
    std::vector<double> rho(k, 0.0);
    rho[0] = 1.0 / static_cast<double>(k);
    for (std::size_t d = 2; d <= k; ++d)
        rho[d - 1] = 1.0 / (static_cast<double>(d) * static_cast<double>(d - 1));
    return rho;
}

std::vector<double> soliton_tau(const SolitonParams& params) {
    params.validate();
    const std::size_t k = params.k;
    const double R = params.R();
    const std::size_t spike = params.spike_index();
    std::vector<double> tau(k, 0.0);
    for (std::size_t d = 1; d < spike; ++d)
        tau[d - 1] = R / (static_cast<double>(d) * static_cast<double>(k));
    tau[spike - 1] = R * std::log(R / params.delta) / static_cast<double>(k);
    return tau;
}

std::vector<double> normalize_degree_distribution(const std::vector<double>& rho,
                                                  const std::vector<double>& tau) {
    if (rho.size() != tau.size())
        throw std::invalid_argument("normalize_degree_distribution: size mismatch");
    long double beta = 0.0L;
    for (std::size_t i = 0; i < rho.size(); ++i)
        beta += static_cast<long double>(rho[i]) + tau[i];
    std::vector<double> mu(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
        mu[i] = static_cast<double>((static_cast<long double>(rho[i]) + tau[i]) / beta);
    return mu;
}

std::vector<double> robust_soliton(const SolitonParams& params) {
    return normalize_degree_distribution(soliton_rho(params.k), soliton_tau(params));
}

LtEncoder::LtEncoder(const FilePayload& file, const SolitonParams& params)
    : file_(&file), params_(params) {
    file.validate();
    if (params.k != file.k) throw std::invalid_argument("LtEncoder: k mismatch");
    const auto mu = robust_soliton(params);
    degree_cdf_.resize(mu.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        acc += mu[i];
        degree_cdf_[i] = acc;
    }
    degree_cdf_.back() = 1.0;
}

std::size_t sample_degree(std::span<const double> cdf, Rng& rng) {
    const double u = uniform_open01(rng);
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::size_t>(it - cdf.begin()) + 1;
}

LtSymbol LtEncoder::next(Rng& rng) {
    const std::size_t k = file_->k;
    const std::size_t d = sample_degree(degree_cdf_, rng);
    LtSymbol s;
    s.symbol_id = next_id_++;
    s.neighbors.reserve(d);
    // uniform without replacement; degrees are small so rejection is cheap
    while (s.neighbors.size() < d) {
        const auto cand = static_cast<std::uint32_t>(uniform_index(rng, k));
        if (std::find(s.neighbors.begin(), s.neighbors.end(), cand) == s.neighbors.end())
            s.neighbors.push_back(cand);
    }
    s.payload.assign(file_->packet_size, 0);
    for (const auto n : s.neighbors) {
        const auto& p = file_->packets[n];
        for (std::size_t i = 0; i < p.size(); ++i) s.payload[i] ^= p[i];
    }
    return s;
}

LtPeelDecoder::LtPeelDecoder(std::size_t k, std::size_t packet_size)
    : k_(k), packet_size_(packet_size), have_(k, 0), packets_(k), index_(k) {}

LtPeelDecoder::IngestResult LtPeelDecoder::ingest(const LtSymbol& s) {
    if (s.neighbors.empty()) throw std::invalid_argument("LtPeelDecoder: empty neighbor set");
    if (s.payload.size() != packet_size_)
        throw std::invalid_argument("LtPeelDecoder: payload length mismatch");

    std::vector<std::uint32_t> nbrs;
    nbrs.reserve(s.neighbors.size());
    std::vector<std::uint8_t> payload = s.payload;
    for (const auto n : s.neighbors) {
        if (n >= k_) throw std::invalid_argument("LtPeelDecoder: neighbor out of range");
        if (have_[n]) {
            const auto& p = packets_[n];
            for (std::size_t i = 0; i < packet_size_; ++i) payload[i] ^= p[i];
        } else {
            nbrs.push_back(n);
        }
    }

    IngestResult res;
    if (nbrs.empty()) {
        res.redundant = true;
        for (const auto b : payload)
            if (b != 0)
                throw std::runtime_error("LtPeelDecoder: inconsistent symbol (corrupted payload)");
        return res;
    }

    const std::size_t before = recovered_count_;
    if (nbrs.size() == 1) {
        recover(nbrs[0], std::move(payload));
    } else {
        const auto slot = static_cast<std::uint32_t>(pending_.size());
        for (const auto n : nbrs) index_[n].push_back(slot);
        pending_.push_back(Pending{std::move(nbrs), std::move(payload), false});
    }
    res.newly_recovered = recovered_count_ - before;
    return res;
}

void LtPeelDecoder::recover(std::uint32_t packet, std::vector<std::uint8_t>&& payload) {
    // ripple: each recovered packet may reduce pending symbols to degree one
    std::vector<std::pair<std::uint32_t, std::vector<std::uint8_t>>> work;
    work.emplace_back(packet, std::move(payload));
    while (!work.empty()) {
        auto [p, data] = std::move(work.back());
        work.pop_back();
        if (have_[p]) {
            if (data != packets_[p])
                throw std::runtime_error("LtPeelDecoder: inconsistent symbol (corrupted payload)");
            continue;
        }
        have_[p] = 1;
        packets_[p] = std::move(data);
        ++recovered_count_;
        for (const auto slot : index_[p]) {
            Pending& pe = pending_[slot];
            if (pe.dead) continue;
            const auto it = std::find(pe.nbrs.begin(), pe.nbrs.end(), p);
            if (it == pe.nbrs.end()) continue;
            pe.nbrs.erase(it);
            const auto& rec = packets_[p];
            for (std::size_t i = 0; i < packet_size_; ++i) pe.payload[i] ^= rec[i];
            if (pe.nbrs.size() == 1) {
                pe.dead = true;
                work.emplace_back(pe.nbrs[0], std::move(pe.payload));
            }
        }
        index_[p].clear();
        index_[p].shrink_to_fit();
    }
}

FilePayload LtPeelDecoder::decoded() const {
    if (!complete()) throw std::logic_error("LtPeelDecoder: decode before full recovery");
    FilePayload f;
    f.k = k_;
    f.packet_size = packet_size_;
    f.packets = packets_;
    return f;
}

void LtPeelDecoder::clear() {
    std::fill(have_.begin(), have_.end(), 0);
    for (auto& p : packets_) p.clear();
    pending_.clear();
    for (auto& v : index_) v.clear();
    recovered_count_ = 0;
}

LtPeelResult lt_peel_decode(std::span<const LtSymbol> symbols, std::size_t k,
                            std::size_t packet_size) {
    LtPeelDecoder dec(k, packet_size);
    for (const auto& s : symbols) dec.ingest(s);
    LtPeelResult r;
    r.recovered_count = dec.recovered_count();
    if (dec.complete()) r.decoded = dec.decoded();
    return r;
}

}  // namespace odsim
