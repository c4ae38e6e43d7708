// detect.cpp - Otsu binarization, star-map differencing, RANSAC line fit

#include "occult/detect.hpp"

#include "occult/errors.hpp"
#include "occult/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace occult {

OtsuResult otsu_threshold(const Frame& frame) {
    if (frame.pixels.empty()) {
        throw std::invalid_argument("otsu_threshold: empty frame");
    }
    std::array<std::int64_t, 256> hist{};
    for (const std::uint8_t v : frame.pixels) ++hist[v];

    int lo = 0;
    while (hist[lo] == 0) ++lo;
    int hi = 255;
    while (hist[hi] == 0) --hi;
    if (lo == hi) {
        return OtsuResult{static_cast<std::uint8_t>(lo), true};
    }

    // Between-class variance at threshold t is n0*n1*(mu0 - mu1)^2 / n^2;
    // maximizing it is maximizing D^2 / (n0*n1) with D = F0*n1 - F1*n0,
    // which stays exact in 64-bit integers until the final division.
    const auto n = static_cast<std::int64_t>(frame.pixels.size());
    std::int64_t f_total = 0;
    for (int v = 0; v < 256; ++v) f_total += static_cast<std::int64_t>(v) * hist[v];

    std::int64_t n0 = 0;
    std::int64_t f0 = 0;
    long double best_score = -1.0L;
    int best_t = 0;
    for (int t = 0; t < 255; ++t) {
        n0 += hist[t];
        f0 += static_cast<std::int64_t>(t) * hist[t];
        const std::int64_t n1 = n - n0;
        if (n0 == 0 || n1 == 0) continue;
        const std::int64_t d = f0 * n1 - (f_total - f0) * n0;
        const long double score = static_cast<long double>(d) *
                                  static_cast<long double>(d) /
                                  (static_cast<long double>(n0) *
                                   static_cast<long double>(n1));
        if (score > best_score) {
            best_score = score;
            best_t = t;
        }
    }
    return OtsuResult{static_cast<std::uint8_t>(best_t), false};
}

BitMask binarize(const Frame& frame, std::uint8_t threshold) {
    BitMask mask;
    mask.width = frame.width;
    mask.height = frame.height;
    mask.bits.resize(frame.pixels.size());
    for (std::size_t p = 0; p < frame.pixels.size(); ++p) {
        mask.bits[p] = frame.pixels[p] > threshold ? 1 : 0;
    }
    return mask;
}

StarMap extract_star_map(const BitMask& mask, const Frame& frame) {
    if (mask.width != frame.width || mask.height != frame.height) {
        throw std::invalid_argument("extract_star_map: dimension mismatch");
    }
    StarMap map;
    map.frame_index = frame.index;
    std::size_t p = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x, ++p) {
            if (mask.bits[p]) {
                map.entries.push_back(StarMapEntry{x, y, frame.pixels[p]});
            }
        }
    }
    return map;
}

std::vector<AnomalyRecord> diff_star_maps(const StarMap& reference,
                                          const StarMap& operating,
                                          PixelShift shift) {
    // Both entry lists are row-major sorted; a constant shift preserves
    // that order, so one merge walk finds the reference-only positions.
    std::vector<AnomalyRecord> out;
    auto op = operating.entries.begin();
    const auto op_end = operating.entries.end();
    for (const StarMapEntry& ref : reference.entries) {
        while (op != op_end) {
            const long oy = static_cast<long>(op->y) + shift.dy;
            const long ox = static_cast<long>(op->x) + shift.dx;
            if (oy < ref.y || (oy == ref.y && ox < ref.x)) {
                ++op;
            } else {
                break;
            }
        }
        const bool present = op != op_end &&
                             static_cast<long>(op->y) + shift.dy == ref.y &&
                             static_cast<long>(op->x) + shift.dx == ref.x;
        if (!present) {
            out.push_back(AnomalyRecord{ref.x, ref.y, operating.frame_index});
        }
    }
    return out;
}

void accumulate_anomalies(AnomalyBuffer& buffer,
                          const std::vector<AnomalyRecord>& fresh) {
    if (buffer.capacity_frames < 1) {
        throw std::invalid_argument("accumulate_anomalies: capacity < 1");
    }
    buffer.records.insert(buffer.records.end(), fresh.begin(), fresh.end());
    if (buffer.records.empty()) return;
    int newest = buffer.records.front().frame_index;
    for (const AnomalyRecord& r : buffer.records) {
        newest = std::max(newest, r.frame_index);
    }
    const int cutoff = newest - (buffer.capacity_frames - 1);
    std::erase_if(buffer.records, [cutoff](const AnomalyRecord& r) {
        return r.frame_index < cutoff;
    });
}

namespace {

struct Line {
    Vec2 point;
    Vec2 dir; ///< unit
};

double line_distance(const Line& line, const Vec2& q) {
    return std::fabs((q.x - line.point.x) * line.dir.y -
                     (q.y - line.point.y) * line.dir.x);
}

// Total-least-squares line through a point set: centroid plus the principal
// direction of the centered scatter.
Line tls_fit(const std::vector<Vec2>& pts) {
    double mx = 0.0, my = 0.0;
    for (const Vec2& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const Vec2& p : pts) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    Vec2 dir{std::cos(theta), std::sin(theta)};
    if (dir.x < 0.0 || (dir.x == 0.0 && dir.y < 0.0)) {
        dir.x = -dir.x;
        dir.y = -dir.y;
    }
    return Line{Vec2{mx, my}, dir};
}

} // namespace

RansacFit ransac_fit(const std::vector<AnomalyRecord>& points,
                     const RansacParams& params) {
    if (params.max_iterations < 1) {
        throw std::invalid_argument("ransac_fit: max_iterations < 1");
    }
    if (!(params.inlier_tolerance > 0.0)) {
        throw std::invalid_argument("ransac_fit: inlier_tolerance <= 0");
    }
    if (params.min_inliers < 2) {
        throw std::invalid_argument("ransac_fit: min_inliers < 2");
    }

    // Sampling runs over the distinct positions in canonical (x, y) order,
    // making the fit invariant to input ordering and to repeated records of
    // one pixel flickering across several frames.
    std::vector<std::pair<int, int>> coords;
    coords.reserve(points.size());
    for (const AnomalyRecord& r : points) {
        coords.emplace_back(r.x, r.y);
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    const std::size_t n = coords.size();
    if (n < 2) {
        throw InsufficientDataError("ransac_fit: fewer than 2 distinct points");
    }
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (const auto& [x, y] : coords) {
        pts.push_back(Vec2{static_cast<double>(x), static_cast<double>(y)});
    }

    const Philox rng(params.seed);
    const double tol = params.inlier_tolerance;
    int best_inliers = -1;
    double best_mse = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0, best_j = 1;
    for (int iter = 0; iter < params.max_iterations; ++iter) {
        const Philox::Block blk = rng.block(streams::kRansac,
                                            static_cast<std::uint64_t>(iter));
        const std::size_t i = blk[0] % n;
        const std::size_t j = (i + 1 + blk[1] % (n - 1)) % n;
        const double dx = pts[j].x - pts[i].x;
        const double dy = pts[j].y - pts[i].y;
        const double len = std::hypot(dx, dy);
        const Line cand{pts[i], Vec2{dx / len, dy / len}};
        int inliers = 0;
        double sum_sq = 0.0;
        for (const Vec2& q : pts) {
            const double d = line_distance(cand, q);
            if (d <= tol) {
                ++inliers;
                sum_sq += d * d;
            }
        }
        const double mse = sum_sq / inliers;
        if (inliers > best_inliers ||
            (inliers == best_inliers && mse < best_mse)) {
            best_inliers = inliers;
            best_mse = mse;
            best_i = i;
            best_j = j;
        }
    }

    // Refit the winner by total least squares on its inlier set, then score
    // the refit line against every distinct position.
    const double sdx = pts[best_j].x - pts[best_i].x;
    const double sdy = pts[best_j].y - pts[best_i].y;
    const double slen = std::hypot(sdx, sdy);
    const Line winner{pts[best_i], Vec2{sdx / slen, sdy / slen}};
    std::vector<Vec2> inlier_set;
    for (const Vec2& q : pts) {
        if (line_distance(winner, q) <= tol) {
            inlier_set.push_back(q);
        }
    }
    const Line refit = tls_fit(inlier_set);
    int final_inliers = 0;
    double final_sum_sq = 0.0;
    for (const Vec2& q : pts) {
        const double d = line_distance(refit, q);
        if (d <= tol) {
            ++final_inliers;
            final_sum_sq += d * d;
        }
    }
    RansacFit fit;
    fit.model = LineModel{refit.point, refit.dir};
    fit.inliers = final_inliers;
    fit.loss = final_inliers > 0
                   ? final_sum_sq / final_inliers
                   : std::numeric_limits<double>::infinity();
    return fit;
}

DetectionResult classify_detection(const std::optional<RansacFit>& fit,
                                   const RansacParams& params) {
    DetectionResult result;
    if (!fit) {
        return result;
    }
    result.model = fit->model;
    result.loss = fit->loss;
    result.inlier_count = fit->inliers;
    result.detected = fit->loss <= params.loss_threshold &&
                      fit->inliers >= params.min_inliers;
    return result;
}

std::vector<AnomalyRecord> collect_anomalies(const std::vector<Frame>& frames,
                                             int k, int j, PixelShift shift) {
    if (k < 1) {
        throw std::invalid_argument("collect_anomalies: k < 1");
    }
    if (j <= k) {
        throw std::invalid_argument("collect_anomalies: j must exceed k");
    }
    if (frames.size() < static_cast<std::size_t>(k) + 1) {
        throw InsufficientDataError(
            "collect_anomalies: need at least k+1 frames");
    }
    for (const Frame& f : frames) {
        if (f.width != frames.front().width ||
            f.height != frames.front().height) {
            throw std::invalid_argument(
                "collect_anomalies: frame dimension mismatch");
        }
    }

    // Only the most recent k+1 star maps are ever referenced.
    std::vector<StarMap> ring(static_cast<std::size_t>(k) + 1);
    AnomalyBuffer buffer;
    buffer.capacity_frames = j;
    for (std::size_t nframe = 0; nframe < frames.size(); ++nframe) {
        const Frame& frame = frames[nframe];
        const OtsuResult otsu = otsu_threshold(frame);
        const BitMask mask = binarize(frame, otsu.threshold);
        ring[nframe % ring.size()] = extract_star_map(mask, frame);
        if (nframe >= static_cast<std::size_t>(k)) {
            const StarMap& reference = ring[(nframe - k) % ring.size()];
            const StarMap& operating = ring[nframe % ring.size()];
            accumulate_anomalies(buffer,
                                 diff_star_maps(reference, operating, shift));
            // Aging is against the operating frame, not the newest record:
            // a quiet stretch must still expire older records.
            const int cutoff = frame.index - (j - 1);
            std::erase_if(buffer.records, [cutoff](const AnomalyRecord& r) {
                return r.frame_index < cutoff;
            });
        }
    }
    return std::move(buffer.records);
}

DetectionResult process_sequence(const std::vector<Frame>& frames,
                                 int k, int j, const RansacParams& params,
                                 PixelShift shift) {
    const std::vector<AnomalyRecord> records =
        collect_anomalies(frames, k, j, shift);
    std::optional<RansacFit> fit;
    try {
        fit = ransac_fit(records, params);
    } catch (const InsufficientDataError&) {
        // fewer than 2 distinct anomalies: classified as no detection
    }
    DetectionResult result = classify_detection(fit, params);
    result.anomaly_count = static_cast<int>(records.size());
    return result;
}

} // namespace occult
