#pragma once

#include <stdexcept>
#include <string>

namespace resgames {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched, non-factorable, or out-of-range dimensions and indices.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

// An input value violates a documented invariant (non-Hermitian matrix,
// non-normalized PMF, effect sums not resolving to the identity, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Malformed serialized input: unparsable JSON or a JSON document whose shape
// does not match the documented schemas.
class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error(what) {}
};

// Numerical breakdown inside an iterative algorithm (singular Newton system,
// loss of positive definiteness, ...). Distinct from hitting an iteration cap.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(what) {}
};

// An iterative algorithm exhausted its iteration budget without converging.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations)
        : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}
    int iterations() const { return iterations_; }

private:
    int iterations_;
};

// A combinatorial enumeration (deterministic response functions, strategy
// vertices) would exceed the documented cap.
class EnumerationCapError : public Error {
public:
    explicit EnumerationCapError(const std::string& what) : Error(what) {}
};

// A dual witness degenerated (its normalization scale is not positive), so it
// cannot certify anything nor seed a game construction.
class DegenerateWitnessError : public Error {
public:
    explicit DegenerateWitnessError(const std::string& what) : Error(what) {}
};

// Game construction was asked to certify an advantage for a pair of objects
// that is entirely free; no advantage exists and no game is built.
class FreeInputGameError : public Error {
public:
    explicit FreeInputGameError(const std::string& what) : Error(what) {}
};

}  // namespace resgames
