#include "odsim/gf256.hpp"

#include <array>
#include <stdexcept>

namespace odsim::gf {

namespace {

struct Tables {
    std::array<std::uint8_t, 256> log{};
    std::array<std::uint8_t, 256> exp{};
    // full product table, MUL[a][b] = a*b; 64 KiB, stays cache-resident
    std::array<std::array<std::uint8_t, 256>, 256> mul{};

    Tables() {
        // generator 3 of GF(256) under 0x11b
        std::uint16_t x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
            log[static_cast<std::uint8_t>(x)] = static_cast<std::uint8_t>(i);
            std::uint16_t x2 = static_cast<std::uint16_t>(x << 1);
            if (x2 & 0x100) x2 ^= 0x11b;
            x = x2 ^ x;  // multiply by 3 = x*2 + x
        }
        exp[255] = exp[0];
        for (int a = 0; a < 256; ++a) {
            for (int b = 0; b < 256; ++b) {
                if (a == 0 || b == 0) {
                    mul[a][b] = 0;
                } else {
                    const int s = log[a] + log[b];
                    mul[a][b] = exp[static_cast<std::size_t>(s % 255)];
                }
            }
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

}  // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b) { return tables().mul[a][b]; }

std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw std::domain_error("gf256: inverse of zero");
    const auto& t = tables();
    return t.exp[static_cast<std::size_t>((255 - t.log[a]) % 255)];
}

const std::uint8_t* mul_row(std::uint8_t a) { return tables().mul[a].data(); }

void axpy(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, std::uint8_t s) {
    if (s == 0) return;
    const std::uint8_t* row = mul_row(s);
    for (std::size_t i = 0; i < n; ++i) dst[i] ^= row[src[i]];
}

void scale(std::uint8_t* dst, std::size_t n, std::uint8_t s) {
    const std::uint8_t* row = mul_row(s);
    for (std::size_t i = 0; i < n; ++i) dst[i] = row[dst[i]];
}

}  // namespace odsim::gf
