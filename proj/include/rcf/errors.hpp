#pragma once

#include <stdexcept>
#include <string>

namespace rcf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hermitian factorization hit a pivot below the singularity threshold.
struct SingularMatrix : Error {
    using Error::Error;
};

// Input failed the Hermitian symmetry check.
struct NotHermitian : Error {
    using Error::Error;
};

// Sherman-Morrison denominator too small; caller must re-invert from scratch.
struct DegenerateUpdate : Error {
    using Error::Error;
};

// Channel matrix lost full row rank; the draw is unusable for zero-forcing.
struct RankDeficient : Error {
    using Error::Error;
};

// Beamformer row count is not a multiple of the per-BS antenna count.
struct BlockMismatch : Error {
    using Error::Error;
};

// Transmit power budget is negative.
struct InfeasibleBudget : Error {
    using Error::Error;
};

// Iterative solver exhausted its iteration cap without meeting tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

// Malformed or inconsistent configuration input.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace rcf
