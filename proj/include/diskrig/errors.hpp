#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace diskrig {

/// Builds an error message by streaming each argument in turn.
template <typename... Args>
std::string msg(Args&&... args) {
    std::ostringstream out;
    (out << ... << std::forward<Args>(args));
    return out.str();
}

/// Base class for all diskrig error conditions.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyPackingError : Error {
    using Error::Error;
};
struct NonpositiveRadiusError : Error {
    using Error::Error;
};
struct OverlapError : Error {
    using Error::Error;
};
struct IndexOutOfRangeError : Error {
    using Error::Error;
};
struct SelfLoopError : Error {
    using Error::Error;
};
struct MultiEdgeError : Error {
    using Error::Error;
};
struct TooLargeError : Error {
    using Error::Error;
};
struct NotInContactError : Error {
    using Error::Error;
};

/// A singular value fell inside the ambiguity band around the rank
/// threshold; the instance is too ill-conditioned to classify.
struct RankAmbiguousError : Error {
    using Error::Error;
};
struct CoincidentNeighborsError : Error {
    using Error::Error;
};
struct NoIntersectionError : Error {
    using Error::Error;
};
struct PlacementFailureError : Error {
    using Error::Error;
};
struct NotInfRigidError : Error {
    using Error::Error;
};
struct NewtonDivergenceError : Error {
    using Error::Error;
};
struct ContactGraphChangedError : Error {
    using Error::Error;
};
struct RigidInputError : Error {
    using Error::Error;
};
struct LpNumericalError : Error {
    using Error::Error;
};
struct DegenerateGaugeError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

}  // namespace diskrig
