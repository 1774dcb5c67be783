#pragma once

#include <stdexcept>
#include <string>

namespace twocenter {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerticalPlane : GeometryError {
    VerticalPlane() : GeometryError("plane has no function-graph form w = au + bv + c") {}
};

struct ConcentricEqual : GeometryError {
    ConcentricEqual() : GeometryError("sphere boundaries coincide") {}
};

struct InvalidBeta : GeometryError {
    explicit InvalidBeta(double beta)
        : GeometryError("beta outside (0, 2]: " + std::to_string(beta)) {}
};

struct InvalidRadius : GeometryError {
    using GeometryError::GeometryError;
};

struct EmptyInput : GeometryError {
    EmptyInput() : GeometryError("point set is empty") {}
};

struct MixedRadii : GeometryError {
    MixedRadii() : GeometryError("balls do not share a common radius") {}
};

struct NotMember : GeometryError {
    NotMember() : GeometryError("point violates a ball by more than the tolerance") {}
};

struct NoIntersection : GeometryError {
    using GeometryError::GeometryError;
};

struct DegenerateArrangement : GeometryError {
    using GeometryError::GeometryError;
};

struct DisconnectedAdjacency : GeometryError {
    DisconnectedAdjacency() : GeometryError("cell adjacency graph is disconnected (enumeration bug)") {}
};

struct CuttingFailure : GeometryError {
    using GeometryError::GeometryError;
};

struct SpanOutOfRange : GeometryError {
    using GeometryError::GeometryError;
};

struct IntersectionBoundViolated : GeometryError {
    using GeometryError::GeometryError;
};

// Internal signal: input violates a general-position assumption.  Callers
// with a perturbation policy catch this, jitter, and retry.
struct DegeneracyDetected : GeometryError {
    using GeometryError::GeometryError;
};

struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("parse error at line " + std::to_string(line_) + ": " + what_),
          line(line_) {}
};

struct EmptyInstance : std::runtime_error {
    EmptyInstance() : std::runtime_error("instance contains no points") {}
};

} // namespace twocenter
