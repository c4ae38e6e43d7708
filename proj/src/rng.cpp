// rng.cpp - Philox4x32-10 block function and inverse normal CDF

#include "occult/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace occult {

namespace {

// Philox4x32 round constants (Salmon et al., "Parallel Random Numbers: As
// Easy as 1, 2, 3").
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW32A   = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B   = 0xBB67AE85u;

} // namespace

Philox::Block Philox::block(std::uint64_t stream, std::uint64_t index) const {
    Block c{static_cast<std::uint32_t>(index),
            static_cast<std::uint32_t>(index >> 32),
            static_cast<std::uint32_t>(stream),
            static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t k0 = m_key0;
    std::uint32_t k1 = m_key1;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += kPhiloxW32A;
            k1 += kPhiloxW32B;
        }
        const std::uint64_t p0 =
            static_cast<std::uint64_t>(kPhiloxM4x32A) * c[0];
        const std::uint64_t p1 =
            static_cast<std::uint64_t>(kPhiloxM4x32B) * c[2];
        c = Block{static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k0,
                  static_cast<std::uint32_t>(p1),
                  static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k1,
                  static_cast<std::uint32_t>(p0)};
    }
    return c;
}

// Wichura's algorithm AS241 (PPND16): rational approximations on three
// intervals, accurate to ~1e-16 over (0, 1).
double normal_icdf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("normal_icdf: p must lie in (0, 1)");
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                  6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
              1.3314166789178437745e2) * r + 3.3871328727963666080e0);
        const double den =
            (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                  3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
              4.2313330701600911252e1) * r + 1.0);
        return q * num / den;
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0);
        const double den =
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
        value = num / den;
    } else {
        r -= 5.0;
        const double num =
            (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0);
        const double den =
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
        value = num / den;
    }
    return (q < 0.0) ? -value : value;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index) {
    const Philox::Block b = Philox(seed).block(stream, index);
    return (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
}

} // namespace occult
