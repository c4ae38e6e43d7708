// pgm.cpp - Binary PGM (P5) encoding and file I/O

#include "occult/pgm.hpp"

#include "occult/errors.hpp"

#include <cctype>
#include <fstream>
#include <limits>

namespace occult {

std::string pgm_encode(const Frame& frame) {
    std::string out = "P5\n" + std::to_string(frame.width) + " " +
                      std::to_string(frame.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(frame.pixels.data()),
               frame.pixels.size());
    return out;
}

namespace {

// Advance past whitespace and '#' comments (which run to end of line).
void skip_separators(const std::string& bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        const char ch = bytes[pos];
        if (ch == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++pos;
        } else {
            break;
        }
    }
}

long parse_header_int(const std::string& bytes, std::size_t& pos,
                      const char* field) {
    skip_separators(bytes, pos);
    const std::size_t start = pos;
    long value = 0;
    while (pos < bytes.size() &&
           std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        value = value * 10 + (bytes[pos] - '0');
        if (value > std::numeric_limits<int>::max()) {
            throw ParseError(std::string("pgm: ") + field + " out of range");
        }
        ++pos;
    }
    if (pos == start) {
        throw ParseError(std::string("pgm: missing ") + field);
    }
    return value;
}

} // namespace

Frame pgm_decode(const std::string& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ParseError("pgm: missing P5 magic");
    }
    std::size_t pos = 2;
    const long width = parse_header_int(bytes, pos, "width");
    const long height = parse_header_int(bytes, pos, "height");
    const long maxval = parse_header_int(bytes, pos, "maxval");
    if (width < 1 || height < 1) {
        throw ParseError("pgm: nonpositive dimensions");
    }
    if (maxval != 255) {
        throw ParseError("pgm: unsupported maxval " + std::to_string(maxval));
    }
    if (pos >= bytes.size() ||
        !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw ParseError("pgm: missing single whitespace after maxval");
    }
    ++pos; // exactly one separator byte before the raw payload
    const std::size_t need =
        static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < need) {
        throw ParseError("pgm: truncated pixel data");
    }
    Frame frame;
    frame.width = static_cast<int>(width);
    frame.height = static_cast<int>(height);
    frame.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                        bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return frame;
}

void write_pgm(const Frame& frame, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError("pgm: cannot open for writing: " + path);
    }
    const std::string bytes = pgm_encode(frame);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw ParseError("pgm: write failed: " + path);
    }
}

Frame read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("pgm: cannot open for reading: " + path);
    }
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw ParseError("pgm: read failed: " + path);
    }
    return pgm_decode(bytes);
}

} // namespace occult
