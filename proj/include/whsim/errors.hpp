#pragma once

#include <stdexcept>
#include <string>

namespace whsim {

/// Base class for all whsim failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix required to be Hermitian positive definite is not (or is too
/// close to singular to factor at the configured pivot floor).
struct NotPositiveDefinite : Error {
    using Error::Error;
};

/// Constellation order is not a perfect square >= 4.
struct InvalidOrder : Error {
    using Error::Error;
};

/// All channel gains are zero; no combining weights exist.
struct ZeroGain : Error {
    using Error::Error;
};

/// A sample covariance came out rank deficient.
struct RankDeficient : Error {
    using Error::Error;
};

/// A sample moment contained non-finite entries.
struct DegenerateBlock : Error {
    using Error::Error;
};

/// Posterior second moments summed to zero; the gain update is undefined.
struct ZeroPosteriorMass : Error {
    using Error::Error;
};

/// All symbol estimates are zero; power calibration is undefined.
struct ZeroEstimate : Error {
    using Error::Error;
};

/// A file or stream did not match the expected format.
struct MalformedInput : Error {
    using Error::Error;
};

/// Shapes or channel counts do not agree.
struct DimensionMismatch : Error {
    using Error::Error;
};

} // namespace whsim
