#pragma once
// occult/rng.hpp - Counter-based deterministic random streams
//
// All randomness in the project flows through Philox4x32-10, a stateless
// block cipher over a 128-bit counter and 64-bit key. A draw is a pure
// function of (seed, stream, index), which is what makes frames renderable
// out of order and campaign trials replayable in isolation: nothing ever
// advances hidden state.

#include <array>
#include <cstdint>

namespace occult {

// -----------------------------------------------------------------------
// Philox4x32-10
// -----------------------------------------------------------------------
class Philox {
public:
    using Block = std::array<std::uint32_t, 4>;

    explicit Philox(std::uint64_t seed)
        : m_key0(static_cast<std::uint32_t>(seed)),
          m_key1(static_cast<std::uint32_t>(seed >> 32)) {}

    /// Four 32-bit words for counter (stream, index). Pure function.
    Block block(std::uint64_t stream, std::uint64_t index) const;

    /// Single 32-bit word: lane `index % 4` of block `index / 4`.
    std::uint32_t word(std::uint64_t stream, std::uint64_t index) const {
        return block(stream, index >> 2)[index & 3];
    }

private:
    std::uint32_t m_key0, m_key1;
};

// -----------------------------------------------------------------------
// Distribution helpers
// -----------------------------------------------------------------------

/// Map a 32-bit word to the open interval (0, 1): (w + 0.5) * 2^-32.
/// Never returns exactly 0 or 1, so it is safe to feed inverse CDFs.
inline double u01(std::uint32_t w) {
    return (static_cast<double>(w) + 0.5) * 0x1p-32;
}

/// Inverse of the standard normal CDF (Wichura's AS241, double precision).
double normal_icdf(double p);

/// Standard normal draw from one uniform word.
inline double normal_from_word(std::uint32_t w) { return normal_icdf(u01(w)); }

/// Derive a child seed from (parent seed, stream, index). Used to hand each
/// campaign trial and each sub-generator its own independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Stream ids. Keeping them in one table prevents accidental stream reuse
// across modules (which would correlate draws).
namespace streams {
inline constexpr std::uint64_t kCatalogPosition = 0x01;
inline constexpr std::uint64_t kTrajectory      = 0x02;
inline constexpr std::uint64_t kRansac          = 0x03;
inline constexpr std::uint64_t kDeriveTrial     = 0x10;
inline constexpr std::uint64_t kDeriveCatalog   = 0x11;
inline constexpr std::uint64_t kDeriveNoise     = 0x12;
inline constexpr std::uint64_t kDeriveRansac    = 0x13;
/// Per-frame noise stream: one stream per frame index.
inline constexpr std::uint64_t noise_frame(int frame_index) {
    return (0x4Eull << 56) | static_cast<std::uint64_t>(static_cast<std::uint32_t>(frame_index));
}
} // namespace streams

} // namespace occult
