#pragma once

#include <stdexcept>
#include <string>

namespace sketchlsq {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A triangular QR factor has a (near-)zero diagonal entry; the sketch
/// failed to preserve the column space.
struct RankDeficient : Error {
    using Error::Error;
};

/// A triangular matrix has an exactly zero diagonal entry.
struct SingularTriangular : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Sparsity parameter exceeds the embedding dimension.
struct InvalidSparsity : Error {
    using Error::Error;
};

/// A dense sketch would exceed the configured memory cap.
struct AllocationTooLarge : Error {
    using Error::Error;
};

/// Distortion estimate outside [0, 1).
struct InvalidDistortion : Error {
    using Error::Error;
};

/// Embedding dimension selection called with d <= n or m <= n.
struct InvalidDims : Error {
    using Error::Error;
};

/// Lambert-W evaluated off the supported branch.
struct NegativeArgument : Error {
    using Error::Error;
};

/// Requested residual norm is not achievable (rho >= 1) or inconsistent.
struct InvalidResidual : Error {
    using Error::Error;
};

/// Matrix Market content this reader does not handle.
struct UnsupportedFormat : Error {
    using Error::Error;
};

/// Gradient iteration error grew by more than the divergence factor.
struct Divergence : Error {
    using Error::Error;
};

/// Krylov basis column collapsed to (numerical) zero.
struct BreakdownIfZero : Error {
    using Error::Error;
};

/// Bad experiment configuration (CLI layer).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace sketchlsq
