#pragma once

#include <stdexcept>
#include <string>

namespace entroflow {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A mesh element (edge, triangle, mixed area) underflows the degeneracy tolerance.
struct DegenerateElement : Error {
    using Error::Error;
};

/// Two surfaces live in different ambient dimensions.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// Remeshing could not preserve a valid manifold mesh.
struct RemeshFailure : Error {
    using Error::Error;
};

/// A Gaussian scale t0 (or t0 - t) is not strictly positive.
struct NonpositiveScale : Error {
    using Error::Error;
};

/// The entropy optimizer produced a non-finite iterate.
struct OptimizerDiverged : Error {
    using Error::Error;
};

/// A linear solve inside a flow step failed.
struct SolveFailure : Error {
    using Error::Error;
};

/// A requested time or scale leaves the trajectory's snapshot range.
struct OutOfRange : Error {
    using Error::Error;
};

/// Fewer than the minimum number of usable samples for an extrapolation.
struct InsufficientSamples : Error {
    using Error::Error;
};

/// An index outside the supported closed-form family (e.g. S^0).
struct UnsupportedIndex : Error {
    using Error::Error;
};

/// Malformed or unreadable geometry / manifest file.
struct IoError : Error {
    using Error::Error;
};

}  // namespace entroflow
