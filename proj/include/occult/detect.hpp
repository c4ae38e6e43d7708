#pragma once
// occult/detect.hpp - Occultation detection pipeline
//
// Per frame: Otsu-threshold, binarize, record bright pixels as a star map.
// Per frame pair (n, n+k): positions bright in the reference map but dark in
// the operating map become anomaly records. Records are buffered over the
// most recent j frames; a RANSAC line fit over the buffer plus a loss/inlier
// gate decides whether a transit is present.

#include "occult/sensor.hpp"
#include "occult/starfield.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace occult {

// -----------------------------------------------------------------------
// Types
// -----------------------------------------------------------------------
struct BitMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; ///< one byte per pixel, 0 = dim, 1 = bright

    bool test(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
};

struct OtsuResult {
    std::uint8_t threshold = 0;
    bool degenerate = false; ///< all pixels share one value
};

struct StarMapEntry {
    int x = 0;
    int y = 0;
    std::uint8_t intensity = 0;
};

struct StarMap {
    int frame_index = 0;
    std::vector<StarMapEntry> entries; ///< unique coordinates, row-major order
};

struct AnomalyRecord {
    int x = 0;
    int y = 0;
    int frame_index = 0; ///< operating frame that went dark
};

struct AnomalyBuffer {
    int capacity_frames = 30; ///< j
    std::vector<AnomalyRecord> records;
};

struct RansacParams {
    int max_iterations = 100;
    double inlier_tolerance = 3.0; ///< pixels
    int min_inliers = 5;
    double loss_threshold = 9.0;   ///< pixel^2
    std::uint64_t seed = 0;
};

struct LineModel {
    Vec2 point;     ///< a point on the line
    Vec2 direction; ///< unit vector, canonical: x > 0, or x == 0 and y > 0
};

struct RansacFit {
    LineModel model;
    double loss = 0.0; ///< mean squared perpendicular distance of inliers
    int inliers = 0;
};

struct DetectionResult {
    bool detected = false;
    std::optional<LineModel> model;
    double loss = 0.0;
    int inlier_count = 0;
    int anomaly_count = 0; ///< raw records handed to the fitter
};

/// Integer translation applied to the operating map before differencing.
/// The simulator produces co-registered frames, so the default is a no-op;
/// externally supplied imagery can be pre-registered through it.
struct PixelShift {
    int dx = 0;
    int dy = 0;
};

// -----------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------

/// Otsu's method: 256-bin histogram, exhaustive scan of the 255 candidate
/// thresholds maximizing between-class variance; ties take the smallest
/// threshold. Bright means intensity > threshold. A single-valued frame is
/// degenerate: the threshold is that value and nothing is bright.
OtsuResult otsu_threshold(const Frame& frame);

/// bit set iff pixel intensity > threshold.
BitMask binarize(const Frame& frame, std::uint8_t threshold);

/// One star-map entry per set bit, carrying the frame's intensity there.
StarMap extract_star_map(const BitMask& mask, const Frame& frame);

/// Positions bright in `reference` but absent from `operating`, stamped with
/// the operating frame index. Brightenings are not anomalies. `shift`
/// translates operating positions before the comparison.
std::vector<AnomalyRecord> diff_star_maps(const StarMap& reference,
                                          const StarMap& operating,
                                          PixelShift shift = {});

/// Append records and evict everything more than capacity_frames-1 behind
/// the newest frame index present.
void accumulate_anomalies(AnomalyBuffer& buffer,
                          const std::vector<AnomalyRecord>& fresh);

/// RANSAC line fit over the distinct (x, y) positions of `points`.
/// Each iteration samples two distinct positions, scores the line through
/// them by inlier count within inlier_tolerance (tie: lower mean squared
/// distance), then the winner is refit by total least squares on its inlier
/// set; loss and inlier count are re-evaluated against the refit line.
/// Deterministic per seed and invariant to input ordering.
/// Throws InsufficientDataError with fewer than 2 distinct positions.
RansacFit ransac_fit(const std::vector<AnomalyRecord>& points,
                     const RansacParams& params);

/// Gate a fit: detected iff loss <= loss_threshold and inliers >= min_inliers.
/// A missing fit (insufficient data) classifies as not detected.
DetectionResult classify_detection(const std::optional<RansacFit>& fit,
                                   const RansacParams& params);

/// The accumulation front end of process_sequence: per-frame Otsu + star
/// maps, pairwise differencing with offset k, accumulation over a depth-j
/// buffer. Returns the records left in the buffer after the final frame.
std::vector<AnomalyRecord> collect_anomalies(const std::vector<Frame>& frames,
                                             int k, int j,
                                             PixelShift shift = {});

/// Full pipeline over a frame sequence with frame offset k and buffer depth
/// j (> k): collect_anomalies, then one RANSAC fit and classification on
/// the final buffer contents.
DetectionResult process_sequence(const std::vector<Frame>& frames,
                                 int k, int j, const RansacParams& params,
                                 PixelShift shift = {});

} // namespace occult
