#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "odsim/rng.hpp"

namespace odsim {

/// Fixed-capacity dynamic bitset used for packet-id and symbol-id sets.
/// Capacity is set once; all set operations assume equal capacity.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t capacity() const { return nbits_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void clear() { for (auto& w : words_) w = 0; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const {
        for (auto w : words_) if (w) return true;
        return false;
    }

    bool operator==(const Bitset& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }

    /// this := this | other
    void or_with(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    }

    /// Number of bits set in (this & ~other).
    std::size_t count_andnot(const Bitset& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & ~o.words_[i]));
        return c;
    }

    /// Visit every bit set in (this & ~other).
    template <class F>
    void for_each_andnot(const Bitset& o, F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i] & ~o.words_[i];
            while (w) {
                const int b = std::countr_zero(w);
                f(i * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                const int b = std::countr_zero(w);
                f(i * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

    /// Uniformly random member of (this & ~other); nbits on empty difference.
    std::size_t pick_andnot(const Bitset& o, Rng& rng) const {
        const std::size_t c = count_andnot(o);
        if (c == 0) return nbits_;
        std::size_t target = uniform_index(rng, c);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i] & ~o.words_[i];
            const std::size_t pc = static_cast<std::size_t>(std::popcount(w));
            if (target >= pc) {
                target -= pc;
                continue;
            }
            while (true) {
                const int b = std::countr_zero(w);
                if (target == 0) return i * 64 + static_cast<std::size_t>(b);
                --target;
                w &= w - 1;
            }
        }
        return nbits_;  // unreachable
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace odsim
