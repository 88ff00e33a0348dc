#pragma once

#include <cstddef>
#include <cstdint>

namespace odsim::gf {

/// GF(256) with the AES reduction polynomial x^8 + x^4 + x^3 + x + 1 (0x11b).
/// mul and inv run off 256-entry log/antilog tables built at startup.

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

std::uint8_t mul(std::uint8_t a, std::uint8_t b);
std::uint8_t inv(std::uint8_t a);  // throws std::domain_error on a == 0

/// Row of the full 256x256 product table for a fixed left factor; the hot
/// path for vector operations.
const std::uint8_t* mul_row(std::uint8_t a);

/// dst[i] ^= s * src[i] for i in [0, n)
void axpy(std::uint8_t* dst, const std::uint8_t* src, std::size_t n, std::uint8_t s);

/// dst[i] = s * dst[i]
void scale(std::uint8_t* dst, std::size_t n, std::uint8_t s);

}  // namespace odsim::gf
