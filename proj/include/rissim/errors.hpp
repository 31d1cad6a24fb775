#pragma once

#include <stdexcept>
#include <string>

namespace rissim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid model, panel, or scene wiring.
struct ConfigError : Error {
    using Error::Error;
};

/// Control value or angle outside the legal range.
struct RangeError : Error {
    using Error::Error;
};

/// Requested phase not achievable by the cell model.
struct UnreachablePhaseError : RangeError {
    using RangeError::RangeError;
};

/// Malformed control schedule (overlap, gap, empty group).
struct ScheduleError : Error {
    using Error::Error;
};

/// Coincident points in a propagation hop.
struct SingularityError : Error {
    using Error::Error;
};

/// Degenerate input to a least-squares fit.
struct FitError : Error {
    using Error::Error;
};

/// File syntax or validation problem; message carries file:line context.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace rissim
