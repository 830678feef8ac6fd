#pragma once

#include <stdexcept>
#include <string>

// Exception taxonomy for the library. Everything derives from Error so
// callers can catch one type at the boundary (the CLI maps these onto
// process exit codes).

namespace schwarz {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A jet component came out NaN or infinite.
struct NonFiniteValue : Error {
    using Error::Error;
};

// Denominator jet value below the configured floor; usually means the
// evaluation point is a critical point of some factor.
struct DivisionByZeroJet : Error {
    using Error::Error;
};

// A finite-difference stencil point left the open unit disk.
struct StencilOutsideDomain : Error {
    using Error::Error;
};

struct PointOutsideDisk : Error {
    using Error::Error;
};

// |f'(z)| below floor where a derivative must not vanish.
struct CriticalPoint : Error {
    using Error::Error;
};

// Mobius transformation evaluated at (or too close to) its pole.
struct PoleHit : Error {
    using Error::Error;
};

// Jacobian |h'|^2 - |g'|^2 vanishes at the evaluation point.
struct DegenerateJacobian : Error {
    using Error::Error;
};

// A precomposition argument does not map the disk into the disk, or is
// not locally univalent where required.
struct RangeViolation : Error {
    using Error::Error;
};

// Two expressions fail the equal-Schwarzian precondition or the
// reconstruction residual check.
struct NotEquivalent : Error {
    using Error::Error;
};

// The chosen recentering point w leads to a vanishing dilatation
// derivative; the caller should pick another w.
struct DegenerateBasePoint : Error {
    using Error::Error;
};

// An operation that requires the canonical normalization received a map
// that does not satisfy it.
struct NotNormalized : Error {
    using Error::Error;
};

// An operation that requires non-constant dilatation received a
// constant-dilatation map.
struct ConstantDilatationError : Error {
    using Error::Error;
};

// Construction-time validation failure (expression trees, harmonic maps,
// parsed documents). Carries a field path or grid point in the message.
struct ValidationError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

} // namespace schwarz
