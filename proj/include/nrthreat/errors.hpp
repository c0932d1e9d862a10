// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nrthreat {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Subcarrier spacing is not one of the defined numerologies.
struct UnknownSpacing : Error {
    using Error::Error;
};

// (bandwidth, spacing) pair has no defined resource-block count.
struct UnsupportedCombination : Error {
    using Error::Error;
};

// Grid or simulation configuration is internally inconsistent.
struct ConfigConflict : Error {
    using Error::Error;
};

// Cell identity component out of range.
struct InvalidId : Error {
    using Error::Error;
};

// Zadoff-Chu root/length pair violates gcd or parity constraints.
struct InvalidRoot : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct TooShort : Error {
    using Error::Error;
};

struct OddLength : Error {
    using Error::Error;
};

struct SizeMismatch : Error {
    using Error::Error;
};

struct ZeroFraction : Error {
    using Error::Error;
};

struct NonPositiveDistance : Error {
    using Error::Error;
};

// A J/S sweep never reached the failure criterion.
struct NoThresholdInRange : Error {
    using Error::Error;
};

// Simulated clock moved backwards.
struct ClockRegression : Error {
    using Error::Error;
};

// Cell search invoked with no beacons and no attacker.
struct EmptyEnvironment : Error {
    using Error::Error;
};

// Bad or unreadable run configuration (CLI exit status 2).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace nrthreat
