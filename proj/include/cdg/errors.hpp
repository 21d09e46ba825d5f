#pragma once

#include <stdexcept>
#include <string>

namespace cdg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid geometric input (off-sphere origin, hemisphere violation, degenerate polygon...).
struct GeometryError : Error {
    using Error::Error;
};

/// Mesh fails a structural validation check (Euler formula, orientation, area budget...).
struct MeshError : Error {
    using Error::Error;
};

/// A departure point or swept region left the candidate halo for an edge.
struct HaloError : Error {
    using Error::Error;
};

/// An element mass-matrix solve failed (singular / ill-conditioned system).
struct SolveError : Error {
    using Error::Error;
};

/// Bad run configuration (unknown case, invalid limiter name, missing keys...).
struct ConfigError : Error {
    using Error::Error;
};

/// A physical-state invariant was violated during a step (negative thickness, boundary flux...).
struct StateError : Error {
    using Error::Error;
};

} // namespace cdg
