// sensor.cpp - Transit occultation and quantized readout noise

#include "occult/sensor.hpp"

#include "occult/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occult {

TrajectorySpec generate_trajectory(std::uint64_t seed, int width, int height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("generate_trajectory: zero-area field");
    }
    const Philox rng(seed);
    TrajectorySpec traj;
    traj.start = Vec2{0.0, u01(rng.word(streams::kTrajectory, 0)) * height};
    traj.end = Vec2{static_cast<double>(width),
                    u01(rng.word(streams::kTrajectory, 1)) * height};
    return traj;
}

Vec2 object_position(const TrajectorySpec& traj, int i) {
    if (traj.total_frames < 2) {
        throw std::invalid_argument("object_position: total_frames < 2");
    }
    if (i < 0 || i >= traj.total_frames) {
        throw std::invalid_argument("object_position: frame index out of range");
    }
    const double t = static_cast<double>(i) / (traj.total_frames - 1);
    return Vec2{traj.start.x + t * (traj.end.x - traj.start.x),
                traj.start.y + t * (traj.end.y - traj.start.y)};
}

Frame apply_occultation(const Frame& frame, Vec2 center, double radius) {
    if (radius < 0.0) {
        throw std::invalid_argument("apply_occultation: negative radius");
    }
    Frame out = frame;
    const int x_lo = std::max(0, static_cast<int>(std::ceil(center.x - radius)));
    const int x_hi = std::min(frame.width - 1,
                              static_cast<int>(std::floor(center.x + radius)));
    const int y_lo = std::max(0, static_cast<int>(std::ceil(center.y - radius)));
    const int y_hi = std::min(frame.height - 1,
                              static_cast<int>(std::floor(center.y + radius)));
    const double r2 = radius * radius;
    for (int y = y_lo; y <= y_hi; ++y) {
        const double dy = y - center.y;
        for (int x = x_lo; x <= x_hi; ++x) {
            const double dx = x - center.x;
            if (dx * dx + dy * dy <= r2) {
                out.at(x, y) = 0;
            }
        }
    }
    return out;
}

double readout_noise_value(const NoiseParams& noise, int frame_index,
                           std::uint64_t pixel_index) {
    const Philox rng(noise.seed);
    const std::uint32_t w =
        rng.word(streams::noise_frame(frame_index), pixel_index);
    return noise.sigma * normal_from_word(w);
}

Frame apply_readout_noise(const Frame& frame, const NoiseParams& noise) {
    if (noise.sigma < 0.0) {
        throw std::invalid_argument("apply_readout_noise: negative sigma");
    }
    if (noise.sigma == 0.0) {
        return frame;
    }
    Frame out = frame;
    const Philox rng(noise.seed);
    const std::uint64_t stream = streams::noise_frame(frame.index);
    const std::size_t count = out.pixels.size();
    std::size_t p = 0;
    while (p < count) {
        const Philox::Block blk = rng.block(stream, p >> 2);
        const std::size_t lanes = std::min<std::size_t>(4, count - p);
        for (std::size_t lane = 0; lane < lanes; ++lane, ++p) {
            const double g = noise.sigma * normal_from_word(blk[lane]);
            const long v = std::lround(out.pixels[p] + g);
            out.pixels[p] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
        }
    }
    return out;
}

std::vector<Frame> render_sequence(const StarCatalog& catalog,
                                   const TrajectorySpec& traj,
                                   const NoiseParams& noise) {
    if (traj.total_frames < 2) {
        throw std::invalid_argument("render_sequence: total_frames < 2");
    }
    if (traj.start.x != 0.0 || traj.end.x != static_cast<double>(catalog.width)) {
        throw std::invalid_argument(
            "render_sequence: trajectory does not span the field width");
    }
    const Frame base = render_base_frame(catalog);
    std::vector<Frame> frames;
    frames.reserve(static_cast<std::size_t>(traj.total_frames));
    for (int i = 0; i < traj.total_frames; ++i) {
        Frame occulted = apply_occultation(base, object_position(traj, i),
                                           traj.occluder_radius);
        occulted.index = i;
        frames.push_back(apply_readout_noise(occulted, noise));
    }
    return frames;
}

} // namespace occult
