#pragma once

#include <utility>
#include <vector>

#include "telefid/bayes.hpp"

namespace telefid {

// Posterior-weighted mixture of conditional teleported states for one
// readout. Components carry strictly positive weights summing to one.
struct MixedTeleportedState {
    Readout readout;
    std::vector<std::pair<double, PureTeleportedState>> components;
};

struct ReadoutFidelity {
    double fidelity = 0.0;
    double probability = 0.0;  // marginal probability of the readout
};

// Averaged fidelity over a set of input states and accepted readouts.
// Within the accepted set, readouts are weighted by their probability
// (renormalized over the set); inputs enter with equal weight.
struct FidelityReport {
    struct PerInput {
        InputState input;
        std::vector<std::pair<Readout, ReadoutFidelity>> per_readout;
        double accepted_probability = 0.0;
        double fidelity = 0.0;
    };

    std::vector<Readout> accepted;
    std::vector<PerInput> per_input;
    // Input-averaged view of the accepted readouts.
    std::vector<std::pair<Readout, ReadoutFidelity>> per_readout;
    double average_fidelity = 0.0;
    double max_truncation_residual = 0.0;
};

MixedTeleportedState mixed_state(const Readout& readout, const InputState& input,
                                 const PumpParameter& pump, const DetectorQuad& dets,
                                 const TruncationPolicy& policy);

// sqrt(sum_components weight * overlap^2), evaluated from the mixture.
// This is the reference path.
double fidelity_direct(const Readout& readout, const InputState& input,
                       const PumpParameter& pump, const DetectorQuad& dets,
                       const TruncationPolicy& policy);

// Eight-term closed form over the qubit-subspace outcomes. Agrees with
// fidelity_direct because every other outcome has zero overlap with the
// input qubit.
double fidelity_closed_form(const Readout& readout, const InputState& input,
                            const PumpParameter& pump, const DetectorQuad& dets,
                            const TruncationPolicy& policy);

FidelityReport average_fidelity(const std::vector<InputState>& inputs,
                                const std::vector<Readout>& accepted,
                                const PumpParameter& pump, const DetectorQuad& dets,
                                const TruncationPolicy& policy);

}  // namespace telefid
