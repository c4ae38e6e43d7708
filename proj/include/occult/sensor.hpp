#pragma once
// occult/sensor.hpp - Occulting-transit and readout-noise simulation
//
// The simulated object is an opaque disc on a straight line from the left
// field edge to the right one. Readout noise is i.i.d. Gaussian per pixel,
// drawn from a counter-based stream keyed by (seed, frame, pixel), so any
// frame can be rendered independently and reproducibly.

#include "occult/rng.hpp"
#include "occult/starfield.hpp"

#include <vector>

namespace occult {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct TrajectorySpec {
    Vec2 start;                   ///< (0, y0)
    Vec2 end;                     ///< (width, y1)
    double occluder_radius = 3.0; ///< pixels
    int total_frames = 30;
};

struct NoiseParams {
    double sigma = 0.5; ///< DN
    std::uint64_t seed = 0;
};

// -----------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------

/// Draw a transit: y endpoints uniform on [0, height], x spanning 0..width.
TrajectorySpec generate_trajectory(std::uint64_t seed, int width, int height);

/// Linear interpolation p(i) = start + (i / (total_frames - 1)) * (end - start).
Vec2 object_position(const TrajectorySpec& traj, int i);

/// Zero every pixel whose center lies within Euclidean distance <= radius
/// of `center`; the disc is clipped silently at field borders.
Frame apply_occultation(const Frame& frame, Vec2 center, double radius);

/// Gaussian noise value (pre-quantization) for one pixel. Exposed so tests
/// can measure the noise distribution before rounding/clamping.
double readout_noise_value(const NoiseParams& noise, int frame_index,
                           std::uint64_t pixel_index);

/// Per-pixel clamp(round(value + g), 0, 255), g ~ N(0, sigma^2) keyed by
/// (seed, frame.index, pixel index). sigma = 0 returns the frame unchanged.
Frame apply_readout_noise(const Frame& frame, const NoiseParams& noise);

/// Compose the full sequence: for each frame index, occult the base frame at
/// the interpolated position and add readout noise.
std::vector<Frame> render_sequence(const StarCatalog& catalog,
                                   const TrajectorySpec& traj,
                                   const NoiseParams& noise);

} // namespace occult
