#pragma once
// tests/support.hpp - independent oracles shared by unit and acceptance tests
//
// Everything here is deliberately written from first principles (direct
// per-threshold recounts, exhaustive pair enumeration, closed-form
// eigenvectors) so the production algorithms are checked against a second
// route, not against themselves.

#include <occult/detect.hpp>
#include <occult/rng.hpp>
#include <occult/starfield.hpp>
#include <occult/triangulate.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace testsupport {

// ----------------------------------------------------------------------------
// Otsu oracle: exhaustive between-class variance scan over the histogram.

inline occult::OtsuResult brute_otsu(const occult::Frame& frame) {
    std::array<std::int64_t, 256> hist{};
    for (const std::uint8_t v : frame.pixels) ++hist[v];
    int lo = 0;
    while (hist[lo] == 0) ++lo;
    int hi = 255;
    while (hist[hi] == 0) --hi;
    if (lo == hi) {
        return occult::OtsuResult{static_cast<std::uint8_t>(lo), true};
    }
    const auto n = static_cast<std::int64_t>(frame.pixels.size());
    long double best = -1.0L;
    int best_t = 0;
    for (int t = 0; t < 255; ++t) {
        std::int64_t n0 = 0, f0 = 0, f1 = 0;
        for (int v = 0; v <= t; ++v) {
            n0 += hist[v];
            f0 += static_cast<std::int64_t>(v) * hist[v];
        }
        for (int v = t + 1; v < 256; ++v) {
            f1 += static_cast<std::int64_t>(v) * hist[v];
        }
        const std::int64_t n1 = n - n0;
        if (n0 == 0 || n1 == 0) continue;
        const std::int64_t d = f0 * n1 - f1 * n0;
        const long double score = static_cast<long double>(d) *
                                  static_cast<long double>(d) /
                                  (static_cast<long double>(n0) *
                                   static_cast<long double>(n1));
        if (score > best) {
            best = score;
            best_t = t;
        }
    }
    return occult::OtsuResult{static_cast<std::uint8_t>(best_t), false};
}

/// Frame whose pixel multiset realizes `hist` (width = count, height = 1).
inline occult::Frame frame_from_histogram(
    const std::array<std::int64_t, 256>& hist) {
    occult::Frame f;
    f.height = 1;
    for (int v = 0; v < 256; ++v) {
        for (std::int64_t k = 0; k < hist[v]; ++k) {
            f.pixels.push_back(static_cast<std::uint8_t>(v));
        }
    }
    f.width = static_cast<int>(f.pixels.size());
    return f;
}

// ----------------------------------------------------------------------------
// RANSAC oracle: exhaustive search over all distinct point pairs, with the
// same scoring, refit, and canonicalization rules as the production fit.

struct OracleLine {
    occult::Vec2 point;
    occult::Vec2 dir;
};

inline double oracle_distance(const OracleLine& line, const occult::Vec2& q) {
    return std::fabs((q.x - line.point.x) * line.dir.y -
                     (q.y - line.point.y) * line.dir.x);
}

inline OracleLine oracle_tls(const std::vector<occult::Vec2>& pts) {
    double mx = 0.0, my = 0.0;
    for (const occult::Vec2& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const occult::Vec2& p : pts) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    occult::Vec2 dir{std::cos(theta), std::sin(theta)};
    if (dir.x < 0.0 || (dir.x == 0.0 && dir.y < 0.0)) {
        dir.x = -dir.x;
        dir.y = -dir.y;
    }
    return OracleLine{occult::Vec2{mx, my}, dir};
}

inline occult::RansacFit exhaustive_line_fit(
    const std::vector<occult::AnomalyRecord>& records, double tol) {
    std::vector<std::pair<int, int>> coords;
    for (const occult::AnomalyRecord& r : records) {
        coords.emplace_back(r.x, r.y);
    }
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    std::vector<occult::Vec2> pts;
    for (const auto& [x, y] : coords) {
        pts.push_back(occult::Vec2{static_cast<double>(x),
                                   static_cast<double>(y)});
    }
    const std::size_t n = pts.size();
    int best_inliers = -1;
    double best_mse = std::numeric_limits<double>::infinity();
    OracleLine best_line{};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = pts[j].x - pts[i].x;
            const double dy = pts[j].y - pts[i].y;
            const double len = std::hypot(dx, dy);
            const OracleLine cand{pts[i], occult::Vec2{dx / len, dy / len}};
            int inliers = 0;
            double sum_sq = 0.0;
            for (const occult::Vec2& q : pts) {
                const double d = oracle_distance(cand, q);
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
                best_line = cand;
            }
        }
    }
    std::vector<occult::Vec2> inlier_set;
    for (const occult::Vec2& q : pts) {
        if (oracle_distance(best_line, q) <= tol) {
            inlier_set.push_back(q);
        }
    }
    const OracleLine refit = oracle_tls(inlier_set);
    occult::RansacFit fit;
    int final_inliers = 0;
    double final_sum_sq = 0.0;
    for (const occult::Vec2& q : pts) {
        const double d = oracle_distance(refit, q);
        if (d <= tol) {
            ++final_inliers;
            final_sum_sq += d * d;
        }
    }
    fit.model = occult::LineModel{refit.point, refit.dir};
    fit.inliers = final_inliers;
    fit.loss = final_inliers > 0
                   ? final_sum_sq / final_inliers
                   : std::numeric_limits<double>::infinity();
    return fit;
}

/// 30 exactly collinear integer points plus 8 outliers planted outside the
/// wedge any 30-inlier line can sweep, so exact recovery is guaranteed.
struct CollinearScene {
    std::vector<occult::AnomalyRecord> records;
    occult::Vec2 true_dir;    ///< canonical unit direction
    occult::Vec2 true_point;  ///< a point on the line
    int collinear_count = 30;
    int outlier_count = 8;
};

inline CollinearScene make_collinear_scene(std::uint64_t seed) {
    static constexpr std::pair<int, int> kDirs[] = {
        {1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2},  {3, 1},
        {1, 3}, {3, 2}, {2, 3}, {4, 1}, {1, -2}, {3, -1}};
    const occult::Philox rng(seed);
    std::uint64_t draw = 0;
    const auto next = [&]() { return rng.word(0x7e57, draw++); };

    CollinearScene scene;
    const auto [dx, dy] = kDirs[next() % (sizeof(kDirs) / sizeof(kDirs[0]))];
    const int x0 = 200 + static_cast<int>(next() % 400);
    const int y0 = 200 + static_cast<int>(next() % 400);
    std::vector<std::pair<int, int>> used;
    for (int t = 0; t < scene.collinear_count; ++t) {
        const int x = x0 + t * dx;
        const int y = y0 + t * dy;
        scene.records.push_back(occult::AnomalyRecord{x, y, t});
        used.emplace_back(x, y);
    }
    const double len = std::hypot(static_cast<double>(dx),
                                  static_cast<double>(dy));
    scene.true_dir = occult::Vec2{dx / len, dy / len};
    if (scene.true_dir.x < 0.0 ||
        (scene.true_dir.x == 0.0 && scene.true_dir.y < 0.0)) {
        scene.true_dir.x = -scene.true_dir.x;
        scene.true_dir.y = -scene.true_dir.y;
    }
    scene.true_point = occult::Vec2{static_cast<double>(x0),
                                    static_cast<double>(y0)};

    // Any line keeping all 30 chain points within tolerance 3 stays within
    // 3 of both chain ends, so its offset at axial distance u from the chain
    // center is at most 3|u|/h for |u| >= h, where h >= 14.5 is the chain
    // half-length. Points it could capture therefore satisfy
    // perp <= 3|u|/h + 3 < 12 + 0.25|u|. Planting outliers beyond that wedge
    // makes "inliers == exactly the 30" a theorem, not a probability.
    const double mid_x = x0 + dx * (scene.collinear_count - 1) / 2.0;
    const double mid_y = y0 + dy * (scene.collinear_count - 1) / 2.0;
    int placed = 0;
    while (placed < scene.outlier_count) {
        const int qx = static_cast<int>(next() % 1200);
        const int qy = static_cast<int>(next() % 1200);
        const double ux = qx - mid_x;
        const double uy = qy - mid_y;
        const double along =
            std::fabs(ux * scene.true_dir.x + uy * scene.true_dir.y);
        const double perp =
            std::fabs(ux * scene.true_dir.y - uy * scene.true_dir.x);
        if (perp <= 12.0 + 0.25 * along) continue;
        bool taken = false;
        for (const auto& [ux, uy] : used) {
            taken = taken || (ux == qx && uy == qy);
        }
        if (taken) continue;
        used.emplace_back(qx, qy);
        scene.records.push_back(occult::AnomalyRecord{qx, qy, 30 + placed});
        ++placed;
    }
    return scene;
}

// ----------------------------------------------------------------------------
// Closed-form symmetric 3x3 eigen-oracle (trigonometric/Cardano route) for
// the plane-fit direction of smallest scatter.

struct EigenOracle {
    std::array<double, 3> values; ///< ascending
    occult::Vec3 smallest_axis;   ///< sign rule: first component > 1e-12 positive
};

inline occult::Vec3 oracle_sign_rule(occult::Vec3 v) {
    for (double c : {v.x, v.y, v.z}) {
        if (std::fabs(c) > 1e-12) {
            if (c < 0.0) {
                v.x = -v.x;
                v.y = -v.y;
                v.z = -v.z;
            }
            break;
        }
    }
    return v;
}

inline EigenOracle cardano_smallest(const std::array<double, 6>& m) {
    // m = {a00, a11, a22, a01, a02, a12}
    const double a00 = m[0], a11 = m[1], a22 = m[2];
    const double a01 = m[3], a02 = m[4], a12 = m[5];
    EigenOracle out{};
    const double p1 = a01 * a01 + a02 * a02 + a12 * a12;
    double l0, l1, l2;
    if (p1 == 0.0) {
        std::array<double, 3> diag{a00, a11, a22};
        std::sort(diag.begin(), diag.end());
        l0 = diag[0];
        l1 = diag[1];
        l2 = diag[2];
    } else {
        const double q = (a00 + a11 + a22) / 3.0;
        const double p2 = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) +
                          (a22 - q) * (a22 - q) + 2.0 * p1;
        const double p = std::sqrt(p2 / 6.0);
        const double b00 = (a00 - q) / p, b11 = (a11 - q) / p,
                     b22 = (a22 - q) / p;
        const double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
        const double detb = b00 * (b11 * b22 - b12 * b12) -
                            b01 * (b01 * b22 - b12 * b02) +
                            b02 * (b01 * b12 - b11 * b02);
        double r = detb / 2.0;
        r = std::clamp(r, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        l2 = q + 2.0 * p * std::cos(phi);
        l0 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
        l1 = 3.0 * q - l0 - l2;
    }
    out.values = {l0, l1, l2};

    // Eigenvector for l0: cross product of two rows of (A - l0 I); take the
    // row pair giving the largest cross norm for stability.
    const occult::Vec3 r0{a00 - l0, a01, a02};
    const occult::Vec3 r1{a01, a11 - l0, a12};
    const occult::Vec3 r2{a02, a12, a22 - l0};
    const occult::Vec3 c01 = occult::cross(r0, r1);
    const occult::Vec3 c02 = occult::cross(r0, r2);
    const occult::Vec3 c12 = occult::cross(r1, r2);
    const double n01 = occult::norm(c01);
    const double n02 = occult::norm(c02);
    const double n12 = occult::norm(c12);
    occult::Vec3 axis = c01;
    double best = n01;
    if (n02 > best) {
        axis = c02;
        best = n02;
    }
    if (n12 > best) {
        axis = c12;
    }
    out.smallest_axis = oracle_sign_rule(occult::normalize(axis));
    return out;
}

/// Scatter matrix of a direction sample set, packed for cardano_smallest.
inline std::array<double, 6> scatter_of(const std::vector<occult::Vec3>& dirs) {
    std::array<double, 6> m{};
    for (const occult::Vec3& d : dirs) {
        m[0] += d.x * d.x;
        m[1] += d.y * d.y;
        m[2] += d.z * d.z;
        m[3] += d.x * d.y;
        m[4] += d.x * d.z;
        m[5] += d.y * d.z;
    }
    return m;
}

// ----------------------------------------------------------------------------
// Random unit vectors (for triangulation property tests).

inline occult::Vec3 random_unit_vec3(const occult::Philox& rng,
                                     std::uint64_t stream,
                                     std::uint64_t& draw) {
    for (;;) {
        const double x = 2.0 * occult::u01(rng.word(stream, draw++)) - 1.0;
        const double y = 2.0 * occult::u01(rng.word(stream, draw++)) - 1.0;
        const double z = 2.0 * occult::u01(rng.word(stream, draw++)) - 1.0;
        const double n = std::sqrt(x * x + y * y + z * z);
        if (n > 0.1 && n <= 1.0) {
            return occult::Vec3{x / n, y / n, z / n};
        }
    }
}

} // namespace testsupport
