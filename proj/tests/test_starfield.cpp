// tests/test_starfield.cpp - flux law, catalog generation/CSV, base rendering

#include <doctest.h>

#include <occult/errors.hpp>
#include <occult/rng.hpp>
#include <occult/starfield.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

using occult::Frame;
using occult::ParseError;
using occult::Star;
using occult::StarCatalog;
using occult::ValidationError;
using occult::catalog_to_csv;
using occult::generate_catalog;
using occult::load_catalog;
using occult::magnitude_to_intensity;
using occult::render_base_frame;
using occult::round_pixel;

namespace {

bool same_star(const Star& a, const Star& b) {
    return a.id == b.id && a.x == b.x && a.y == b.y &&
           a.magnitude == b.magnitude;
}

} // namespace

// ----------------------------------------------------------------------------
// Pixel rounding and the flux law

TEST_CASE("round_pixel rounds half away from zero") {
    CHECK(round_pixel(10.2) == 10);
    CHECK(round_pixel(20.7) == 21);
    CHECK(round_pixel(0.5) == 1);
    CHECK(round_pixel(11.5) == 12);
    CHECK(round_pixel(-0.5) == -1);
    CHECK(round_pixel(-0.2) == 0);
}

TEST_CASE("magnitude_to_intensity anchors and saturates") {
    CHECK(magnitude_to_intensity(-1.5) == 255);
    CHECK(magnitude_to_intensity(6.5) == 0);  // round(255 * 10^-3.2) = 0
    CHECK(magnitude_to_intensity(-3.0) == 255); // clamped above
    CHECK(magnitude_to_intensity(20.0) == 0);
    // Anchors for the digital-number band used by the campaign defaults.
    CHECK(magnitude_to_intensity(1.82) == 12);
    CHECK(magnitude_to_intensity(2.40) == 7);
}

TEST_CASE("magnitude_to_intensity is monotone non-increasing") {
    int prev = 256;
    for (double m = -3.0; m <= 8.0; m += 0.01) {
        const int dn = magnitude_to_intensity(m);
        CHECK(dn <= prev);
        CHECK(dn >= 0);
        CHECK(dn <= 255);
        prev = dn;
    }
}

// ----------------------------------------------------------------------------
// Catalog generation

TEST_CASE("generate_catalog basic contract") {
    const StarCatalog cat = generate_catalog(11, 500, 2000, 1000, -1.5, 6.5);
    CHECK(cat.width == 2000);
    CHECK(cat.height == 1000);
    CHECK(cat.stars.size() == 500);

    std::set<std::pair<long, long>> pixels;
    for (std::size_t i = 0; i < cat.stars.size(); ++i) {
        const Star& s = cat.stars[i];
        CHECK(s.id == static_cast<std::int64_t>(i));
        CHECK(s.x >= 0.0);
        CHECK(s.x < 2000.0);
        CHECK(s.y >= 0.0);
        CHECK(s.y < 1000.0);
        CHECK(s.magnitude >= -1.5);
        CHECK(s.magnitude <= 6.5);
        pixels.emplace(round_pixel(s.x), round_pixel(s.y));
    }
    // Rounded pixels are pairwise distinct by construction.
    CHECK(pixels.size() == cat.stars.size());
}

TEST_CASE("generate_catalog is deterministic per seed") {
    const StarCatalog a = generate_catalog(42, 300, 640, 480, 0.0, 4.0);
    const StarCatalog b = generate_catalog(42, 300, 640, 480, 0.0, 4.0);
    REQUIRE(a.stars.size() == b.stars.size());
    for (std::size_t i = 0; i < a.stars.size(); ++i) {
        CHECK(same_star(a.stars[i], b.stars[i]));
    }
    const StarCatalog c = generate_catalog(43, 300, 640, 480, 0.0, 4.0);
    bool any_diff = false;
    for (std::size_t i = 0; i < c.stars.size(); ++i) {
        any_diff = any_diff || !same_star(a.stars[i], c.stars[i]);
    }
    CHECK(any_diff);
}

TEST_CASE("generate_catalog with fewer stars is a prefix of more stars") {
    // Density calibration relies on coverage being monotone in star count,
    // which holds because a smaller catalog is literally a prefix.
    const StarCatalog small = generate_catalog(7, 300, 640, 480, 0.0, 4.0);
    const StarCatalog big = generate_catalog(7, 500, 640, 480, 0.0, 4.0);
    REQUIRE(big.stars.size() == 500);
    for (std::size_t i = 0; i < small.stars.size(); ++i) {
        CHECK(same_star(small.stars[i], big.stars[i]));
    }
}

TEST_CASE("generate_catalog magnitude law matches its distribution") {
    // Empirical CDF of magnitudes against the truncated 10^(0.5 m) law,
    // two-sided Kolmogorov-Smirnov at alpha = 0.01.
    const double m0 = 0.0, m1 = 4.0;
    const StarCatalog cat = generate_catalog(5, 50000, 4000, 2000, m0, m1);
    std::vector<double> mags;
    mags.reserve(cat.stars.size());
    for (const Star& s : cat.stars) mags.push_back(s.magnitude);
    std::sort(mags.begin(), mags.end());
    const double a0 = std::pow(10.0, 0.5 * m0);
    const double a1 = std::pow(10.0, 0.5 * m1);
    double d_stat = 0.0;
    const double n = static_cast<double>(mags.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const double cdf = (std::pow(10.0, 0.5 * mags[i]) - a0) / (a1 - a0);
        d_stat = std::max(d_stat, std::abs(cdf - (i + 1) / n));
        d_stat = std::max(d_stat, std::abs(cdf - i / n));
    }
    CHECK(d_stat < 1.63 / std::sqrt(n));
}

TEST_CASE("generate_catalog validates its arguments") {
    CHECK_THROWS_AS(generate_catalog(1, 10, 0, 100, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_catalog(1, -1, 100, 100, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_catalog(1, 10, 100, 100, 2.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_catalog(1, 101, 10, 10, 0, 1),
                    std::invalid_argument);
    // Exactly filling the field must terminate.
    const StarCatalog full = generate_catalog(1, 100, 10, 10, 0, 1);
    CHECK(full.stars.size() == 100);
}

// ----------------------------------------------------------------------------
// Catalog CSV

TEST_CASE("load_catalog parses a minimal catalog") {
    const StarCatalog cat =
        load_catalog("id,x,y,magnitude\n0,10.5,20.25,3\n", 100, 100);
    REQUIRE(cat.stars.size() == 1);
    CHECK(cat.stars[0].id == 0);
    CHECK(cat.stars[0].x == 10.5);
    CHECK(cat.stars[0].y == 20.25);
    CHECK(cat.stars[0].magnitude == 3.0);
    CHECK(cat.width == 100);
    CHECK(cat.height == 100);
}

TEST_CASE("load_catalog header-only input yields an empty catalog") {
    const StarCatalog cat = load_catalog("id,x,y,magnitude\n", 50, 50);
    CHECK(cat.stars.empty());
}

TEST_CASE("load_catalog accepts CRLF line endings") {
    const StarCatalog cat =
        load_catalog("id,x,y,magnitude\r\n1,2.5,3.5,1\r\n", 10, 10);
    REQUIRE(cat.stars.size() == 1);
    CHECK(cat.stars[0].id == 1);
}

TEST_CASE("load_catalog parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(
        load_catalog("id,x,y,magnitude\n0,10.5,abc,3.0\n", 100, 100),
        doctest::Contains("line 2"), ParseError);
    CHECK_THROWS_WITH_AS(load_catalog("x,y\n", 100, 100),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_WITH_AS(load_catalog("", 100, 100),
                         doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_WITH_AS(
        load_catalog("id,x,y,magnitude\n0,1.0,2.0\n", 100, 100),
        doctest::Contains("4 fields"), ParseError);
}

TEST_CASE("load_catalog validates bounds, cutoff, and finiteness") {
    CHECK_THROWS_AS(
        load_catalog("id,x,y,magnitude\n0,150,5,3\n", 100, 100),
        ValidationError);
    // Raw coordinate in range but rounding off the field.
    CHECK_THROWS_AS(
        load_catalog("id,x,y,magnitude\n0,99.7,5,3\n", 100, 100),
        ValidationError);
    CHECK_THROWS_AS(
        load_catalog("id,x,y,magnitude\n0,5,5,7.2\n", 100, 100),
        ValidationError);
    // Tighter explicit cutoff.
    CHECK_THROWS_AS(
        load_catalog("id,x,y,magnitude\n0,5,5,4.1\n", 100, 100, 4.0),
        ValidationError);
    CHECK_THROWS_AS(
        load_catalog("id,x,y,magnitude\n0,5,5,inf\n", 100, 100),
        ValidationError);
    CHECK_THROWS_AS(load_catalog("id,x,y,magnitude\n", 0, 100),
                    std::invalid_argument);
}

TEST_CASE("load_catalog merges stars sharing a pixel, keeping the brighter") {
    const StarCatalog cat = load_catalog(
        "id,x,y,magnitude\n0,10.2,20.2,3.0\n1,10.4,19.8,2.0\n2,30,30,5\n",
        100, 100);
    REQUIRE(cat.stars.size() == 2);
    CHECK(cat.stars[0].id == 1); // brighter of the two at pixel (10, 20)
    CHECK(cat.stars[0].magnitude == 2.0);
    CHECK(cat.stars[1].id == 2);
}

TEST_CASE("catalog CSV round-trips bit-exactly") {
    const StarCatalog cat = generate_catalog(9, 200, 800, 600, -1.5, 6.5);
    const StarCatalog back =
        load_catalog(catalog_to_csv(cat), cat.width, cat.height);
    REQUIRE(back.stars.size() == cat.stars.size());
    for (std::size_t i = 0; i < cat.stars.size(); ++i) {
        CHECK(same_star(cat.stars[i], back.stars[i]));
    }
}

// ----------------------------------------------------------------------------
// Base-frame rendering

TEST_CASE("render_base_frame empty catalog is all dark") {
    StarCatalog cat;
    cat.width = 32;
    cat.height = 16;
    const Frame f = render_base_frame(cat);
    CHECK(f.width == 32);
    CHECK(f.height == 16);
    CHECK(std::count(f.pixels.begin(), f.pixels.end(), 0) == 32 * 16);
}

TEST_CASE("render_base_frame places one saturated pixel per bright star") {
    StarCatalog cat;
    cat.width = 64;
    cat.height = 48;
    cat.stars.push_back(Star{0, 10.2, 20.7, -1.5});
    const Frame f = render_base_frame(cat);
    int nonzero = 0;
    for (std::uint8_t v : f.pixels) nonzero += v != 0;
    CHECK(nonzero == 1);
    CHECK(f.at(10, 21) == 255);
}

TEST_CASE("render_base_frame nonzero count equals distinct bright pixels") {
    const StarCatalog cat = generate_catalog(21, 400, 640, 480, -1.5, 2.0);
    // Every magnitude in [-1.5, 2.0] maps to a nonzero digital number.
    const Frame f = render_base_frame(cat);
    int nonzero = 0;
    for (std::uint8_t v : f.pixels) nonzero += v != 0;
    CHECK(nonzero == 400);
    // Rendering is pure: same catalog, same frame.
    CHECK(render_base_frame(cat).pixels == f.pixels);
}

TEST_CASE("render_base_frame resolves overlapping deposits by maximum") {
    StarCatalog cat;
    cat.width = 16;
    cat.height = 16;
    cat.stars.push_back(Star{0, 5.1, 5.1, 2.0});
    cat.stars.push_back(Star{1, 4.9, 4.9, -1.5}); // same pixel, brighter
    const Frame f = render_base_frame(cat);
    CHECK(f.at(5, 5) == 255);
}

TEST_CASE("render_base_frame rejects out-of-field stars") {
    StarCatalog cat;
    cat.width = 8;
    cat.height = 8;
    cat.stars.push_back(Star{0, 7.9, 3.0, 1.0}); // rounds to x = 8
    CHECK_THROWS_AS(render_base_frame(cat), ValidationError);
}
