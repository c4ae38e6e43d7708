#pragma once
// occult/triangulate.hpp - Two-observer geometry
//
// Each observer turns its image-plane transit into a viewing plane: the
// plane spanned by the lines of sight to the occulted stars, carried as a
// unit normal plus the observer position. Two such planes intersect in the
// transit direction (the radiant); a sight line from one observer pierced
// through the other's plane localizes the object in space. The conic-radius
// helpers quantify why a short observation arc projects to a straight line.

#include <utility>
#include <vector>

namespace occult {

// -----------------------------------------------------------------------
// Types
// -----------------------------------------------------------------------
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct ViewingPlane {
    Vec3 normal;   ///< unit normal of the plane containing observer and track
    Vec3 position; ///< observer location, km
};

struct LineOfSight {
    Vec3 direction; ///< unit vector from the observer toward one track pixel
};

struct RadiantSolution {
    Vec3 direction;       ///< unit vector along the plane intersection
    double norm_used = 0.0; ///< length of the raw cross product
    double alpha = 0.0;     ///< right ascension, [0, 2*pi)
    double delta = 0.0;     ///< declination, [-pi/2, pi/2]
};

struct GeocentricPoint {
    Vec3 position;      ///< km
    double range = 0.0; ///< distance from the observer along the sight line
};

struct KeplerElements {
    double semi_major_axis = 0.0;
    double eccentricity = 0.0;
    double true_anomaly = 0.0; ///< radians
};

// -----------------------------------------------------------------------
// Vector helpers
// -----------------------------------------------------------------------
Vec3 cross(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
/// Throws SingularityError on the zero vector.
Vec3 normalize(const Vec3& v);

// -----------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------

/// Direction of the intersection of two viewing planes: the normalized
/// cross product of the normals, with its equatorial angles. Throws
/// DegenerateGeometryError when the planes are parallel (cross-product
/// norm <= 1e-9).
RadiantSolution radiant_direction(const ViewingPlane& plane_a,
                                  const ViewingPlane& plane_b);

/// (alpha, delta) of a unit vector: alpha = atan2(y, x) wrapped to
/// [0, 2*pi), delta = asin(z). At the poles (x = y = 0) alpha is 0 by
/// convention. Throws std::invalid_argument when the norm is off unit by
/// more than 1e-9.
std::pair<double, double> radiant_ra_dec(const Vec3& direction);

/// Intersection of the sight line from observer A with observer B's viewing
/// plane, translated back to the common frame. Throws
/// DegenerateGeometryError when the sight line is parallel to the plane
/// (|los . normal_B| <= 1e-9) or the intersection lies behind the observer.
GeocentricPoint geocentric_position(const LineOfSight& los,
                                    const ViewingPlane& plane_a,
                                    const ViewingPlane& plane_b);

/// Best-fit viewing plane through a track of sight lines: the unit normal
/// minimizing the sum of squared dot products with the samples (smallest
/// eigenvector of their 3x3 scatter), sign fixed so the first nonzero
/// component is positive. Throws InsufficientDataError with fewer than 2
/// samples, DegenerateGeometryError when the samples do not span a plane.
ViewingPlane viewing_plane_from_track(const Vec3& observer,
                                      const std::vector<LineOfSight>& samples);

/// Conic radius r(f) = a (1 - e^2) / (1 + e cos f).
/// Throws SingularityError when the denominator vanishes.
double kepler_radius(const KeplerElements& el);

/// dr/df = a (1 - e^2) e sin f / (1 + e cos f)^2.
/// Throws SingularityError when the denominator vanishes.
double kepler_radius_derivative(const KeplerElements& el);

} // namespace occult
