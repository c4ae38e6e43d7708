// starfield.cpp - Catalog generation, CSV round-trip, base-frame rendering

#include "occult/starfield.hpp"

#include "occult/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_map>

namespace occult {

long round_pixel(double v) {
    return std::lround(v);
}

int magnitude_to_intensity(double m) {
    constexpr double kRefMagnitude = -1.5;
    constexpr double kRefIntensity = 255.0;
    const double flux = kRefIntensity * std::pow(10.0, -0.4 * (m - kRefMagnitude));
    const long dn = std::lround(flux);
    return static_cast<int>(std::clamp(dn, 0L, 255L));
}

StarCatalog generate_catalog(std::uint64_t seed, int star_count,
                             int width, int height,
                             double mag_min, double mag_max) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("generate_catalog: zero-area field");
    }
    if (star_count < 0) {
        throw std::invalid_argument("generate_catalog: negative star count");
    }
    if (!(mag_min <= mag_max)) {
        throw std::invalid_argument("generate_catalog: mag_min > mag_max");
    }
    const std::size_t cells =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (static_cast<std::size_t>(star_count) > cells) {
        throw std::invalid_argument(
            "generate_catalog: more stars than integer pixels");
    }

    StarCatalog catalog;
    catalog.width = width;
    catalog.height = height;
    catalog.magnitude_cutoff = std::max(mag_max, catalog.magnitude_cutoff);
    catalog.stars.reserve(static_cast<std::size_t>(star_count));

    // Inverse CDF of the density ~ 10^(0.5 m) truncated to [mag_min, mag_max]:
    // m = 2 log10(a0 + u (a1 - a0)) with a_i = 10^(0.5 mag_i).
    const double a0 = std::pow(10.0, 0.5 * mag_min);
    const double a1 = std::pow(10.0, 0.5 * mag_max);

    const Philox rng(seed);
    std::vector<std::uint8_t> occupied(cells, 0);
    std::uint64_t draw = 0;
    for (int i = 0; i < star_count; ++i) {
        Star star;
        star.id = i;
        for (;;) {
            const double x =
                u01(rng.word(streams::kCatalogPosition, draw++)) * width;
            const double y =
                u01(rng.word(streams::kCatalogPosition, draw++)) * height;
            const long px = round_pixel(x);
            const long py = round_pixel(y);
            if (px < 0 || px >= width || py < 0 || py >= height) {
                continue; // rounded off the field; redraw
            }
            std::uint8_t& cell =
                occupied[static_cast<std::size_t>(py) * width + px];
            if (cell) {
                continue; // integer pixel already taken; redraw
            }
            cell = 1;
            star.x = x;
            star.y = y;
            break;
        }
        const double u = u01(rng.word(streams::kCatalogPosition, draw++));
        star.magnitude = (a1 > a0) ? 2.0 * std::log10(a0 + u * (a1 - a0))
                                   : mag_min;
        catalog.stars.push_back(star);
    }
    return catalog;
}

namespace {

double parse_double_field(const std::string& token, int line_number,
                          const char* field) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || token.empty()) {
        throw ParseError("catalog: line " + std::to_string(line_number) +
                         ": bad " + field + " value '" + token + "'");
    }
    if (!std::isfinite(value)) {
        throw ValidationError("catalog: line " + std::to_string(line_number) +
                              ": non-finite " + field);
    }
    return value;
}

std::int64_t parse_id_field(const std::string& token, int line_number) {
    std::int64_t value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || token.empty()) {
        throw ParseError("catalog: line " + std::to_string(line_number) +
                         ": bad id value '" + token + "'");
    }
    return value;
}

} // namespace

StarCatalog load_catalog(const std::string& text, int width, int height,
                         double magnitude_cutoff) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("load_catalog: zero-area field");
    }
    StarCatalog catalog;
    catalog.width = width;
    catalog.height = height;
    catalog.magnitude_cutoff = magnitude_cutoff;

    std::size_t pos = 0;
    int line_number = 0;
    bool saw_header = false;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (pos > text.size()) break;
            continue;
        }
        if (!saw_header) {
            if (line != "id,x,y,magnitude") {
                throw ParseError("catalog: line 1: expected header "
                                 "id,x,y,magnitude");
            }
            saw_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 4) {
            throw ParseError("catalog: line " + std::to_string(line_number) +
                             ": expected 4 fields, got " +
                             std::to_string(fields.size()));
        }
        Star star;
        star.id = parse_id_field(fields[0], line_number);
        star.x = parse_double_field(fields[1], line_number, "x");
        star.y = parse_double_field(fields[2], line_number, "y");
        star.magnitude = parse_double_field(fields[3], line_number, "magnitude");
        const long px = round_pixel(star.x);
        const long py = round_pixel(star.y);
        if (star.x < 0.0 || star.x >= width || star.y < 0.0 ||
            star.y >= height || px < 0 || px >= width || py < 0 ||
            py >= height) {
            throw ValidationError("catalog: line " +
                                  std::to_string(line_number) +
                                  ": star out of bounds");
        }
        if (star.magnitude > magnitude_cutoff) {
            throw ValidationError("catalog: line " +
                                  std::to_string(line_number) +
                                  ": magnitude fainter than cutoff");
        }
        catalog.stars.push_back(star);
    }
    if (!saw_header) {
        throw ParseError("catalog: line 1: expected header id,x,y,magnitude");
    }

    // Collapse stars sharing an integer pixel, keeping the brighter
    // (generation never produces them; external catalogs may).
    std::unordered_map<std::uint64_t, std::size_t> owner;
    owner.reserve(catalog.stars.size());
    std::vector<Star> merged;
    merged.reserve(catalog.stars.size());
    for (const Star& star : catalog.stars) {
        const std::uint64_t cell =
            (static_cast<std::uint64_t>(round_pixel(star.y)) << 32) |
            static_cast<std::uint32_t>(round_pixel(star.x));
        const auto [it, inserted] = owner.emplace(cell, merged.size());
        if (inserted) {
            merged.push_back(star);
        } else if (star.magnitude < merged[it->second].magnitude) {
            merged[it->second] = star;
        }
    }
    catalog.stars = std::move(merged);
    return catalog;
}

std::string catalog_to_csv(const StarCatalog& catalog) {
    std::string out = "id,x,y,magnitude\n";
    char row[128];
    for (const Star& star : catalog.stars) {
        std::snprintf(row, sizeof(row), "%lld,%.17g,%.17g,%.17g\n",
                      static_cast<long long>(star.id), star.x, star.y,
                      star.magnitude);
        out += row;
    }
    return out;
}

Frame render_base_frame(const StarCatalog& catalog) {
    if (catalog.width < 1 || catalog.height < 1) {
        throw std::invalid_argument("render_base_frame: zero-area field");
    }
    Frame frame;
    frame.width = catalog.width;
    frame.height = catalog.height;
    frame.pixels.assign(static_cast<std::size_t>(catalog.width) *
                            static_cast<std::size_t>(catalog.height),
                        0);
    for (const Star& star : catalog.stars) {
        const long px = round_pixel(star.x);
        const long py = round_pixel(star.y);
        if (px < 0 || px >= catalog.width || py < 0 || py >= catalog.height) {
            throw ValidationError("render_base_frame: star out of bounds");
        }
        std::uint8_t& cell = frame.at(static_cast<int>(px), static_cast<int>(py));
        const int dn = magnitude_to_intensity(star.magnitude);
        cell = std::max<std::uint8_t>(cell, static_cast<std::uint8_t>(dn));
    }
    return frame;
}

} // namespace occult
