#pragma once
// occult/pgm.hpp - Bit-exact binary PGM (P5) reader/writer
//
// Frames are persisted as 8-bit binary PGM: magic "P5", whitespace-separated
// width/height/maxval header (with '#' comments allowed), then width*height
// raw bytes. maxval must be 255 - the on-disk format is the in-memory frame.

#include "occult/starfield.hpp"

#include <string>

namespace occult {

/// Encode a frame as binary PGM bytes.
std::string pgm_encode(const Frame& frame);

/// Decode binary PGM bytes into a frame (index left at 0).
/// Throws ParseError on malformed headers, maxval != 255, or short payloads.
Frame pgm_decode(const std::string& bytes);

/// Write a frame to `path` (binary). Throws ParseError on I/O failure.
void write_pgm(const Frame& frame, const std::string& path);

/// Read a frame from `path`. Throws ParseError on I/O or format failure.
Frame read_pgm(const std::string& path);

} // namespace occult
