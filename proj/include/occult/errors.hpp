#pragma once
// occult/errors.hpp - Exception taxonomy shared by all pipeline modules
//
// std::invalid_argument is used directly for precondition violations; the
// types below distinguish error classes callers are expected to branch on
// (the CLI maps all of them to the data-error exit code).

#include <stdexcept>
#include <string>

namespace occult {

/// Malformed external input (CSV rows, PGM headers, JSON shapes).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Well-formed input that violates a domain constraint (bounds, cutoffs).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Too few data points for the requested fit or pipeline stage.
class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& what) : std::runtime_error(what) {}
};

/// Geometry with no usable solution (parallel planes, rank-deficient fits).
class DegenerateGeometryError : public std::runtime_error {
public:
    explicit DegenerateGeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation at a pole of the underlying formula.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// Density calibration could not bracket the requested target.
class CalibrationFailureError : public std::runtime_error {
public:
    explicit CalibrationFailureError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace occult
