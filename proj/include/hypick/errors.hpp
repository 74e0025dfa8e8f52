#pragma once

#include <stdexcept>
#include <string>

namespace hypick {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the mathematical domain (point on or outside the unit
// circle, nonpositive radius, malformed parameter ranges, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Two points required to be distinct coincide (within 1e-14 Euclidean).
class DistinctnessError : public Error {
public:
    explicit DistinctnessError(const std::string& what) : Error(what) {}
};

// A difference-quotient evaluation hit a 0/0 form: both operands of a
// complex pseudohyperbolic distance are unimodular within tolerance.
class DegenerateLevel : public Error {
public:
    explicit DegenerateLevel(const std::string& what) : Error(what) {}
};

// Structural mismatch: non-Hermitian matrix, length mismatch, bad index.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error(what) {}
};

// A recursion step needs an interior quotient but the data sits on the
// boundary of the admissible region (|quotient| >= 1 - 1e-12).
class BoundaryCase : public Error {
public:
    explicit BoundaryCase(const std::string& what) : Error(what) {}
};

} // namespace hypick
