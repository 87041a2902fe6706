#pragma once

#include <stdexcept>
#include <string>

namespace telefid {

// A conditional teleported state was requested for an outcome with zero
// normalization factor (no post-measurement state exists).
struct UnreachableOutcome : std::domain_error {
    using std::domain_error::domain_error;
};

// rate * window is too large for the first-order dark-count model.
struct WindowTooLarge : std::domain_error {
    using std::domain_error::domain_error;
};

// The truncated partition sum failed its tail bound at the maximum truncation.
struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The readout has zero probability under the model; no posterior exists.
struct ZeroEvidence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every accepted readout has zero probability for some input state.
struct NoAcceptedEvidence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sweep configuration could not be parsed or validated.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace telefid
