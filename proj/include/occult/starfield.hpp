#pragma once
// occult/starfield.hpp - Star catalogs and noiseless base-frame rendering
//
// A catalog is a set of sub-pixel star positions with apparent magnitudes.
// Rendering deposits each star as a single pixel (no point-spread function)
// whose value follows the standard logarithmic flux law anchored at
// magnitude -1.5 -> 255 DN.

#include "occult/errors.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace occult {

// -----------------------------------------------------------------------
// Types
// -----------------------------------------------------------------------
struct Star {
    std::int64_t id = 0;
    double x = 0.0;         ///< sub-pixel column, 0 <= x < width
    double y = 0.0;         ///< sub-pixel row
    double magnitude = 0.0; ///< apparent visual magnitude
};

struct StarCatalog {
    int width = 0;
    int height = 0;
    double magnitude_cutoff = 6.5; ///< faintest admissible magnitude
    std::vector<Star> stars;
};

/// 8-bit grayscale sensor image, row-major.
struct Frame {
    int width = 0;
    int height = 0;
    int index = 0; ///< position in a rendered sequence
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

// -----------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------

/// Integer pixel for a sub-pixel coordinate (round half away from zero).
long round_pixel(double v);

/// Flux law: DN = clamp(round(255 * 10^(-0.4 * (m + 1.5))), 0, 255).
/// Monotone non-increasing in m.
int magnitude_to_intensity(double m);

/// Draw `star_count` stars: positions uniform over the field, magnitudes
/// with density proportional to 10^(0.5 m) truncated to [mag_min, mag_max].
/// Stars are guaranteed distinct integer pixels after rounding (positions
/// that collide or round off the field are redrawn). Deterministic per seed.
StarCatalog generate_catalog(std::uint64_t seed, int star_count,
                             int width, int height,
                             double mag_min, double mag_max);

/// Parse the catalog CSV (`id,x,y,magnitude` header, one star per line).
/// The CSV carries no field dimensions, so the caller supplies them;
/// stars rounding outside the field or fainter than the cutoff are rejected.
StarCatalog load_catalog(const std::string& text, int width, int height,
                         double magnitude_cutoff = 6.5);

/// Serialize a catalog to the CSV format accepted by load_catalog.
std::string catalog_to_csv(const StarCatalog& catalog);

/// Render the catalog to a frame: background 0 DN, one pixel per star,
/// overlapping deposits resolved by maximum.
Frame render_base_frame(const StarCatalog& catalog);

} // namespace occult
