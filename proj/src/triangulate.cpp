// triangulate.cpp - Plane intersection, ray-plane localization, plane fits

#include "occult/triangulate.hpp"

#include "occult/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace occult {

Vec3 cross(const Vec3& a, const Vec3& b) {
    return Vec3{a.y * b.z - a.z * b.y,
                a.z * b.x - a.x * b.z,
                a.x * b.y - a.y * b.x};
}

double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

double norm(const Vec3& v) {
    return std::sqrt(dot(v, v));
}

Vec3 normalize(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) {
        throw SingularityError("normalize: zero vector");
    }
    return Vec3{v.x / n, v.y / n, v.z / n};
}

RadiantSolution radiant_direction(const ViewingPlane& plane_a,
                                  const ViewingPlane& plane_b) {
    const Vec3 raw = cross(plane_a.normal, plane_b.normal);
    const double d = norm(raw);
    if (d <= 1e-9) {
        throw DegenerateGeometryError(
            "radiant_direction: viewing planes are parallel");
    }
    RadiantSolution sol;
    sol.direction = Vec3{raw.x / d, raw.y / d, raw.z / d};
    sol.norm_used = d;
    const auto [alpha, delta] = radiant_ra_dec(sol.direction);
    sol.alpha = alpha;
    sol.delta = delta;
    return sol;
}

std::pair<double, double> radiant_ra_dec(const Vec3& direction) {
    if (std::fabs(norm(direction) - 1.0) > 1e-9) {
        throw std::invalid_argument("radiant_ra_dec: direction not unit length");
    }
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    double alpha = 0.0;
    if (direction.x != 0.0 || direction.y != 0.0) {
        alpha = std::atan2(direction.y, direction.x);
        if (alpha < 0.0) alpha += kTwoPi;
        if (alpha >= kTwoPi) alpha = 0.0;
    }
    const double delta = std::asin(std::clamp(direction.z, -1.0, 1.0));
    return {alpha, delta};
}

GeocentricPoint geocentric_position(const LineOfSight& los,
                                    const ViewingPlane& plane_a,
                                    const ViewingPlane& plane_b) {
    const double denom = dot(plane_b.normal, los.direction);
    if (std::fabs(denom) <= 1e-9) {
        throw DegenerateGeometryError(
            "geocentric_position: sight line parallel to viewing plane");
    }
    const Vec3 offset{plane_b.position.x - plane_a.position.x,
                      plane_b.position.y - plane_a.position.y,
                      plane_b.position.z - plane_a.position.z};
    const double t = dot(plane_b.normal, offset) / denom;
    if (t <= 0.0) {
        throw DegenerateGeometryError(
            "geocentric_position: intersection behind the observer");
    }
    GeocentricPoint point;
    point.position = Vec3{plane_a.position.x + t * los.direction.x,
                          plane_a.position.y + t * los.direction.y,
                          plane_a.position.z + t * los.direction.z};
    point.range = t;
    return point;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric 3x3 matrix. Eigenvalues
// come back ascending with matching unit-norm column eigenvectors.
void eigen_symmetric_3x3(std::array<std::array<double, 3>, 3> a,
                         std::array<double, 3>& values,
                         std::array<std::array<double, 3>, 3>& vectors) {
    std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) +
                           std::fabs(a[1][2]);
        if (off == 0.0) break;
        constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& pair : kPairs) {
            const int p = pair[0];
            const int q = pair[1];
            if (a[p][q] == 0.0) continue;
            const double tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                             (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            for (int r = 0; r < 3; ++r) {
                const double arp = a[r][p];
                const double arq = a[r][q];
                a[r][p] = c * arp - s * arq;
                a[r][q] = s * arp + c * arq;
            }
            for (int r = 0; r < 3; ++r) {
                const double apr = a[p][r];
                const double aqr = a[q][r];
                a[p][r] = c * apr - s * aqr;
                a[q][r] = s * apr + c * aqr;
            }
            for (int r = 0; r < 3; ++r) {
                const double vrp = v[r][p];
                const double vrq = v[r][q];
                v[r][p] = c * vrp - s * vrq;
                v[r][q] = s * vrp + c * vrq;
            }
        }
    }
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int lhs, int rhs) { return a[lhs][lhs] < a[rhs][rhs]; });
    for (int col = 0; col < 3; ++col) {
        values[col] = a[order[col]][order[col]];
        for (int r = 0; r < 3; ++r) {
            vectors[col][r] = v[r][order[col]];
        }
    }
}

} // namespace

ViewingPlane viewing_plane_from_track(const Vec3& observer,
                                      const std::vector<LineOfSight>& samples) {
    if (samples.size() < 2) {
        throw InsufficientDataError(
            "viewing_plane_from_track: need at least 2 sight lines");
    }
    std::array<std::array<double, 3>, 3> scatter{};
    for (const LineOfSight& los : samples) {
        const Vec3 d = normalize(los.direction);
        const double comp[3] = {d.x, d.y, d.z};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                scatter[r][c] += comp[r] * comp[c];
            }
        }
    }
    std::array<double, 3> values{};
    std::array<std::array<double, 3>, 3> vectors{};
    eigen_symmetric_3x3(scatter, values, vectors);
    // Rank 1 (all sight lines parallel) leaves the two smallest eigenvalues
    // near zero and the normal direction unconstrained.
    if (values[1] <= 1e-12 * std::max(values[2], 1e-300)) {
        throw DegenerateGeometryError(
            "viewing_plane_from_track: sight lines do not span a plane");
    }
    Vec3 normal = normalize(Vec3{vectors[0][0], vectors[0][1], vectors[0][2]});
    const double comp[3] = {normal.x, normal.y, normal.z};
    for (double c : comp) {
        if (std::fabs(c) > 1e-12) {
            if (c < 0.0) {
                normal = Vec3{-normal.x, -normal.y, -normal.z};
            }
            break;
        }
    }
    return ViewingPlane{normal, observer};
}

double kepler_radius(const KeplerElements& el) {
    if (el.eccentricity < 0.0) {
        throw std::invalid_argument("kepler_radius: negative eccentricity");
    }
    const double denom = 1.0 + el.eccentricity * std::cos(el.true_anomaly);
    if (denom == 0.0) {
        throw SingularityError("kepler_radius: 1 + e cos f vanishes");
    }
    return el.semi_major_axis *
           (1.0 - el.eccentricity * el.eccentricity) / denom;
}

double kepler_radius_derivative(const KeplerElements& el) {
    if (el.eccentricity < 0.0) {
        throw std::invalid_argument(
            "kepler_radius_derivative: negative eccentricity");
    }
    const double denom = 1.0 + el.eccentricity * std::cos(el.true_anomaly);
    if (denom == 0.0) {
        throw SingularityError(
            "kepler_radius_derivative: 1 + e cos f vanishes");
    }
    return el.semi_major_axis * (1.0 - el.eccentricity * el.eccentricity) *
           el.eccentricity * std::sin(el.true_anomaly) / (denom * denom);
}

} // namespace occult
