#pragma once

#include <stdexcept>
#include <string>

namespace splitgeo {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A point lies outside a potential's domain of validity.
struct OutOfDomainError : Error {
    using Error::Error;
};

// A derivative multi-index beyond total order 2 was requested.
struct UnsupportedDerivativeError : Error {
    using Error::Error;
};

// The argument of a logarithm dropped below the representable floor
// (raised by the Liouville ansatz when the gradient combination vanishes).
struct DomainError : Error {
    using Error::Error;
};

// Liouville built-in solutions require lambda > 0.
struct InvalidLambdaError : Error {
    using Error::Error;
};

// A constructor argument violates a documented invariant
// (degenerate denominators, non-positive speed of light, ...).
struct InvalidParameterError : Error {
    using Error::Error;
};

// The adaptive step size fell below the representable floor while the
// local error estimate still exceeded the tolerance.
struct StepUnderflowError : Error {
    using Error::Error;
};

// Two phase-space objects built over different 2D blocks were combined.
struct BlockMismatchError : Error {
    using Error::Error;
};

// A closed-form logarithm received a non-positive (or zero-modulus) argument.
struct LogDomainError : Error {
    using Error::Error;
};

// A complex logarithm argument landed on the principal branch cut.
struct BranchCutError : Error {
    using Error::Error;
};

// Root bracketing found no sign change inside the search window,
// or an iterative root solve failed to converge.
struct BracketFailureError : Error {
    using Error::Error;
};

// Faraday eigenvalue radicand went negative (J -+ I1 < 0).
struct NonRealEigenvalueError : Error {
    using Error::Error;
};

// A mapped-back elliptic trajectory carries an imaginary residue above
// the caller's threshold.
struct NonRealResultError : Error {
    using Error::Error;
};

// The sample grid is too small for the requested coefficient space.
struct GridTooSmallError : Error {
    using Error::Error;
};

// The assembled bracket matrix has rank zero.
struct DegenerateBasisError : Error {
    using Error::Error;
};

// Adaptive quadrature could not reach the requested absolute tolerance.
struct QuadratureError : Error {
    using Error::Error;
};

// Config file is syntactically invalid or contains an unknown key.
struct ParseError : Error {
    using Error::Error;
};

// Config file parsed but a value violates its documented range.
struct ValidationError : Error {
    using Error::Error;
};

} // namespace splitgeo
